#include <gtest/gtest.h>

#include "dense_oracle.hpp"
#include "symvqe/errors.hpp"
#include "symvqe/gates.hpp"

using namespace symvqe;
using oracle::Mat;

namespace {

const cplx kI{0.0, 1.0};

Mat m4(const Mat4& u) {
  Mat m(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = u[4 * i + j];
  return m;
}

Mat block(int a, int b, cplx aa, cplx ab, cplx ba, cplx bb) {
  Mat m = Mat::Zero(4, 4);
  m(a, a) = aa;
  m(a, b) = ab;
  m(b, a) = ba;
  m(b, b) = bb;
  return m;
}

const std::vector<GateKind> kParam2 = {GateKind::CPHASE,   GateKind::GIVENS, GateKind::BOGOLIUBOV,
                                       GateKind::EXCHANGE, GateKind::FGATE,  GateKind::EZZ};
const std::vector<GateKind> kParam1 = {GateKind::RX, GateKind::RY, GateKind::RZ};

}  // namespace

TEST(Gates, PrintedMatrices) {
  const Mat4 f = matrix_2q(gate(GateKind::FSWAP, 1, 2));
  EXPECT_EQ(f[12], cplx(0));
  EXPECT_EQ(f[13], cplx(0));
  EXPECT_EQ(f[14], cplx(0));
  EXPECT_EQ(f[15], cplx(-1));
  EXPECT_LT((m4(matrix_2q(gate(GateKind::GIVENS, 1, 2, 0.0))) - Mat::Identity(4, 4)).norm(), 1e-15);
  const Mat fpi = m4(matrix_2q(gate(GateKind::FGATE, 1, 2, M_PI)));
  EXPECT_LT((fpi - (-kI) * m4(f)).norm(), 1e-15);
  // G(2 pi) = diag(1, -1, -1, 1)
  Mat g2 = Mat::Zero(4, 4);
  g2.diagonal() << 1, -1, -1, 1;
  EXPECT_LT((m4(matrix_2q(gate(GateKind::GIVENS, 1, 2, 2 * M_PI))) - g2).norm(), 1e-14);
  // Bogoliubov first row: cos, 0, 0, -sin
  const double th = 0.8;
  const Mat4 b = matrix_2q(gate(GateKind::BOGOLIUBOV, 1, 2, th));
  EXPECT_NEAR(b[0].real(), std::cos(th / 2), 1e-15);
  EXPECT_NEAR(b[3].real(), -std::sin(th / 2), 1e-15);
}

TEST(Gates, UnitaryAndIdentityAtZero) {
  for (GateKind k : kParam2) {
    for (double th : {0.0, 0.37, -2.1, 5.0}) EXPECT_TRUE(is_unitary(matrix_2q(gate(k, 1, 2, th)), 1e-14));
    EXPECT_LT((m4(matrix_2q(gate(k, 1, 2, 0.0))) - Mat::Identity(4, 4)).norm(), 1e-15) << kind_name(k);
  }
  for (GateKind k : kParam1) {
    const Mat2 u = matrix_1q(gate(k, 1, 0.0));
    EXPECT_EQ(u[0], cplx(1));
    EXPECT_EQ(u[1], cplx(0));
    EXPECT_EQ(u[3], cplx(1));
  }
  for (GateKind k : {GateKind::CNOT, GateKind::CZ, GateKind::SWAP, GateKind::FSWAP})
    EXPECT_TRUE(is_unitary(matrix_2q(gate(k, 1, 2)), 1e-15));
}

TEST(Gates, Involutions) {
  for (GateKind k : {GateKind::FSWAP, GateKind::CZ, GateKind::SWAP, GateKind::CNOT}) {
    const Mat m = m4(matrix_2q(gate(k, 1, 2)));
    EXPECT_LT((m * m - Mat::Identity(4, 4)).norm(), 1e-15) << kind_name(k);
  }
}

TEST(Gates, PeriodicityOfInvolutoryGenerators) {
  const double th = 0.91;
  for (GateKind k : {GateKind::FGATE, GateKind::EZZ}) {
    const Mat a = m4(matrix_2q(gate(k, 1, 2, th)));
    EXPECT_LT((m4(matrix_2q(gate(k, 1, 2, th + 2 * M_PI))) + a).norm(), 1e-13);
    EXPECT_LT((m4(matrix_2q(gate(k, 1, 2, th + 4 * M_PI))) - a).norm(), 1e-13);
  }
  for (GateKind k : kParam1) {
    const Mat2 a = matrix_1q(gate(k, 1, th)), b = matrix_1q(gate(k, 1, th + 2 * M_PI)),
               c = matrix_1q(gate(k, 1, th + 4 * M_PI));
    for (int i = 0; i < 4; ++i) {
      EXPECT_LT(std::abs(a[i] + b[i]), 1e-13);
      EXPECT_LT(std::abs(a[i] - c[i]), 1e-13);
    }
  }
}

TEST(Gates, ClosedFormAgainstMatrixExponential) {
  // exp(-i th A / 2) = I + (cos(th/2) - 1) B - i sin(th/2) A with B = A^2.
  const double th = 1.37;
  struct Case {
    GateKind kind;
    Mat a;
  };
  Mat sw = Mat::Zero(4, 4);
  sw(1, 2) = sw(2, 1) = 1;
  const Mat zz = oracle::kron(oracle::pauli('Z'), oracle::pauli('Z'));
  std::vector<Case> cases = {
      {GateKind::GIVENS, block(1, 2, 0, kI, -kI, 0)},
      {GateKind::BOGOLIUBOV, block(0, 3, 0, -kI, kI, 0)},
      {GateKind::EXCHANGE, sw},
      {GateKind::FGATE, m4(matrix_2q(gate(GateKind::FSWAP, 1, 2)))},
      {GateKind::EZZ, zz},
  };
  for (const auto& c : cases) {
    const Mat b = c.a * c.a;
    const Mat closed = Mat::Identity(4, 4) + (std::cos(th / 2) - 1) * b - kI * std::sin(th / 2) * c.a;
    const Mat ex = oracle::expm_minus_i(c.a, th / 2);
    const Mat got = m4(matrix_2q(gate(c.kind, 1, 2, th)));
    EXPECT_LT((closed - ex).norm(), 1e-12) << kind_name(c.kind);
    EXPECT_LT((got - ex).norm(), 1e-12) << kind_name(c.kind);
  }
}

TEST(Gates, JwFragment) {
  EXPECT_TRUE(jw_cz_conjugation(6, 1, 2).ops.empty());
  const Circuit c = jw_cz_conjugation(6, 1, 4);
  ASSERT_EQ(c.ops.size(), 2u);
  EXPECT_EQ(c.ops[0], gate(GateKind::CZ, 4, 2));
  EXPECT_EQ(c.ops[1], gate(GateKind::CZ, 4, 3));
  EXPECT_EQ(jw_cz_conjugation(8, 2, 7).ops.size(), 4u);
  EXPECT_THROW(jw_cz_conjugation(4, 2, 2), UsageError);
}

TEST(Gates, ExchangeWithStringMatchesExponential) {
  const int n = 5;
  const double th = 0.77;
  const Mat xy = oracle::pauli_string("XZZXI") + oracle::pauli_string("YZZYI");
  const Mat expect = oracle::expm_minus_i(xy, th / 4);
  EXPECT_LT((oracle::dense(fermionic_two_level(n, 1, 4, GateKind::EXCHANGE, th)) - expect).norm(), 1e-12);
  EXPECT_LT((oracle::dense(fermionic_two_level(n, 4, 1, GateKind::EXCHANGE, th)) - expect).norm(), 1e-12);
}

TEST(Gates, FermionicTwoLevelMatchesFermionExponentials) {
  const int n = 5;
  const double th = -1.13;
  for (auto [i, j] : std::vector<std::pair<int, int>>{{1, 2}, {2, 5}, {5, 1}, {4, 2}, {3, 4}}) {
    const Mat ci = oracle::annihilator(n, i), cj = oracle::annihilator(n, j);
    const Mat di = ci.adjoint(), dj = cj.adjoint();
    const int a = std::min(i, j), b = std::max(i, j);
    const Mat ca = oracle::annihilator(n, a), cb = oracle::annihilator(n, b);
    const Mat id = Mat::Identity(1 << n, 1 << n);

    const Mat givens_gen = kI * (dj * ci - di * cj);
    const Mat bog_gen = kI * (ca.adjoint() * cb.adjoint()) - kI * (cb * ca);
    const Mat hop_gen = di * cj + dj * ci;
    const Mat fswap_gen = id - di * ci - dj * cj + di * cj + dj * ci;

    auto circuit = [&](GateKind k) { return oracle::dense(fermionic_two_level(n, i, j, k, th)); };
    EXPECT_LT((circuit(GateKind::GIVENS) - oracle::expm_minus_i(givens_gen, th / 2)).norm(), 1e-12)
        << i << "," << j;
    EXPECT_LT((circuit(GateKind::BOGOLIUBOV) - oracle::expm_minus_i(bog_gen, th / 2)).norm(), 1e-12)
        << i << "," << j;
    EXPECT_LT((circuit(GateKind::EXCHANGE) - oracle::expm_minus_i(hop_gen, th / 2)).norm(), 1e-12)
        << i << "," << j;
    EXPECT_LT((circuit(GateKind::FGATE) - oracle::expm_minus_i(fswap_gen, th / 2)).norm(), 1e-12)
        << i << "," << j;
    // EZZ carries no string.
    EXPECT_EQ(fermionic_two_level(n, i, j, GateKind::EZZ, th).ops.size(), 1u);
  }
  EXPECT_EQ(fermionic_two_level(4, 2, 3, GateKind::GIVENS, 0.3).ops.size(), 1u);
  EXPECT_THROW(fermionic_two_level(4, 1, 3, GateKind::CNOT, 0.0), UsageError);
}

TEST(Gates, LongRangeFswap) {
  const int n = 6;
  const Circuit nn = long_range_fswap(n, 3, 4);
  ASSERT_EQ(nn.ops.size(), 1u);
  EXPECT_EQ(nn.ops[0].kind, GateKind::FSWAP);
  const Mat cz = oracle::embed2(n, 3, 4, matrix_2q(gate(GateKind::CZ, 3, 4)));
  const Mat swp = oracle::embed2(n, 3, 4, matrix_2q(gate(GateKind::SWAP, 3, 4)));
  EXPECT_LT((oracle::dense(nn) - swp * cz).norm(), 1e-14);
  EXPECT_LT((oracle::dense(nn) - cz * swp).norm(), 1e-14);

  for (auto [i, j] : std::vector<std::pair<int, int>>{{1, 6}, {2, 5}, {6, 2}}) {
    const Mat f = oracle::dense(long_range_fswap(n, i, j));
    EXPECT_LT((f * f - Mat::Identity(1 << n, 1 << n)).norm(), 1e-12);
    // Nearest-neighbor chain: carry mode a up to b, then mode b back down to a.
    const int a = std::min(i, j), b = std::max(i, j);
    Circuit chain(n);
    for (int k = a; k < b; ++k) chain.add(gate(GateKind::FSWAP, k, k + 1));
    for (int k = b - 2; k >= a; --k) chain.add(gate(GateKind::FSWAP, k, k + 1));
    EXPECT_LT((f - oracle::dense(chain)).norm(), 1e-12);
    // Fermionic swap of modes a and b.
    const Mat ca = oracle::annihilator(n, a), cb = oracle::annihilator(n, b);
    const Mat fs = Mat::Identity(1 << n, 1 << n) - ca.adjoint() * ca - cb.adjoint() * cb +
                   ca.adjoint() * cb + cb.adjoint() * ca;
    EXPECT_LT((f - fs).norm(), 1e-12);
  }
}

TEST(Gates, TwoLevelVariants) {
  const Mat2 x = matrix_1q(gate(GateKind::X, 1));
  EXPECT_EQ(two_level_controlled_u(TwoLevelVariant::A, x), matrix_2q(gate(GateKind::CNOT, 1, 2)));
  const double th = 0.66;
  const Mat2 ry = matrix_1q(gate(GateKind::RY, 1, th));
  EXPECT_LT((m4(two_level_controlled_u(TwoLevelVariant::C, ry)) -
             m4(matrix_2q(gate(GateKind::GIVENS, 1, 2, th)))).norm(), 1e-15);
  EXPECT_LT((m4(two_level_controlled_u(TwoLevelVariant::D, ry)) -
             m4(matrix_2q(gate(GateKind::BOGOLIUBOV, 1, 2, th)))).norm(), 1e-15);
  // Every variant leaves exactly two basis states untouched.
  for (auto v : {TwoLevelVariant::A, TwoLevelVariant::B, TwoLevelVariant::C, TwoLevelVariant::D,
                 TwoLevelVariant::E, TwoLevelVariant::F}) {
    const Mat m = m4(two_level_controlled_u(v, ry));
    EXPECT_TRUE(is_unitary(two_level_controlled_u(v, ry), 1e-14));
    int fixed = 0;
    for (int k = 0; k < 4; ++k) fixed += (m.col(k) - Mat::Identity(4, 4).col(k)).norm() < 1e-15;
    EXPECT_EQ(fixed, 2);
  }
}

TEST(Gates, FormatCircuit) {
  Circuit c(3);
  c.add(gate(GateKind::H, 1));
  c.add(gate(GateKind::CNOT, 1, 2));
  c.add(gate(GateKind::RZ, 3, 0.5));
  EXPECT_EQ(format_circuit(c), "H 1\nCNOT 1 2\nRZ 3 0.5\n");
}

TEST(Gates, Validation) {
  EXPECT_THROW(gate(GateKind::CNOT, 1), UsageError);
  EXPECT_THROW(gate(GateKind::H, 1, 2), UsageError);
  EXPECT_THROW(gate(GateKind::CZ, 2, 2), UsageError);
  Circuit c(2);
  c.add(gate(GateKind::CZ, 1, 3));
  EXPECT_THROW(c.validate(), UsageError);
}

TEST(Gates, FusedEmittedCircuitsAreUnitary) {
  const int n = 6;
  for (GateKind k : {GateKind::GIVENS, GateKind::BOGOLIUBOV, GateKind::EXCHANGE, GateKind::FGATE}) {
    const Mat u = oracle::dense(fermionic_two_level(n, 6, 1, k, 0.4));
    EXPECT_LT((u.adjoint() * u - Mat::Identity(1 << n, 1 << n)).norm(), 1e-12);
  }
}

namespace {

Circuit random_circuit(int n, int len, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> q(1, n), kind(0, 14), composite(0, 3);
  std::uniform_real_distribution<double> ang(-3, 3);
  Circuit c(n);
  for (int g = 0; g < len; ++g) {
    if (composite(rng) == 0) {
      int i = q(rng), j = q(rng);
      while (j == i) j = q(rng);
      const GateKind cores[] = {GateKind::GIVENS, GateKind::BOGOLIUBOV, GateKind::EXCHANGE,
                                GateKind::FGATE};
      c.append(fermionic_two_level(n, i, j, cores[g % 4], ang(rng)));
      if (g % 3 == 0) c.append(long_range_fswap(n, j, i));
      continue;
    }
    const auto k = static_cast<GateKind>(kind(rng));
    if (is_two_qubit(k)) {
      int i = q(rng), j = q(rng);
      while (j == i) j = q(rng);
      c.add(gate(k, i, j, ang(rng)));
    } else {
      c.add(gate(k, q(rng), ang(rng)));
    }
  }
  return c;
}

}  // namespace

TEST(CompiledCircuit, MatchesReferencePath) {
  for (int n : {4, 7}) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      const Circuit c = random_circuit(n, 60, seed);
      for (auto opt : {CompiledCircuit::Options{true, 3}, CompiledCircuit::Options{false, 0},
                       CompiledCircuit::Options{true, 0}, CompiledCircuit::Options{false, 2}}) {
        auto ref = oracle::random_state(n, seed);
        auto fast = ref;
        apply_circuit(ref, c);
        CompiledCircuit::compile(c, opt).apply(fast);
        ASSERT_LT(distance(ref, fast), 1e-12) << "n=" << n << " seed=" << seed;
      }
    }
  }
}

TEST(CompiledCircuit, FusesJwComposites) {
  const int n = 8;
  const Circuit c = fermionic_two_level(n, 1, 8, GateKind::EXCHANGE, 0.3);
  EXPECT_EQ(c.ops.size(), 13u);
  EXPECT_EQ(CompiledCircuit::compile(c).instruction_count(), 1u);
  Circuit m(n);
  for (int k = 1; k < n; ++k) m.add(gate(GateKind::CZ, k, k + 1));
  m.add(gate(GateKind::X, 3));
  EXPECT_EQ(CompiledCircuit::compile(m).instruction_count(), 1u);
}
