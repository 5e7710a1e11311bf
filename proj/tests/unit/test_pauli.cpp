#include <gtest/gtest.h>

#include "dense_oracle.hpp"
#include "symvqe/errors.hpp"
#include "symvqe/pauli.hpp"

using namespace symvqe;
using oracle::Mat;

namespace {

PauliSum random_sum(int n, int terms, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> mask(0, (std::uint64_t{1} << n) - 1);
  std::normal_distribution<double> nd;
  PauliSum p(n);
  for (int k = 0; k < terms; ++k) p.add_term({cplx(nd(rng), nd(rng)), mask(rng), mask(rng)});
  return p;
}

}  // namespace

TEST(Pauli, SingleQubitProducts) {
  const auto x = PauliSum::term(1, {{1, 'X'}}), y = PauliSum::term(1, {{1, 'Y'}}),
             z = PauliSum::term(1, {{1, 'Z'}});
  const cplx i(0, 1);
  auto check = [](const PauliSum& got, const Mat& want) {
    EXPECT_LT((oracle::dense(got) - want).norm(), 1e-15);
  };
  check(x * y, i * oracle::pauli('Z'));
  check(y * z, i * oracle::pauli('X'));
  check(z * x, i * oracle::pauli('Y'));
  check(y * x, -i * oracle::pauli('Z'));
  check(y * y, oracle::pauli('I'));
}

TEST(Pauli, ProductsMatchDense) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto a = random_sum(4, 6, seed), b = random_sum(4, 5, seed + 100);
    EXPECT_LT((oracle::dense(a * b) - oracle::dense(a) * oracle::dense(b)).norm(), 1e-12);
  }
}

TEST(Pauli, SimplifyCombinesTerms) {
  auto p = PauliSum::term(3, {{1, 'X'}, {3, 'Z'}}) + PauliSum::term(3, {{1, 'X'}, {3, 'Z'}}, 2.0) -
           PauliSum::term(3, {{2, 'Y'}}) + PauliSum::term(3, {{2, 'Y'}});
  p.simplify();
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p.terms()[0].coeff, cplx(3.0));
}

TEST(Pauli, ApplicationExamples) {
  auto s = basis_state(2, 0b01);  // qubit 1 occupied
  auto out = apply_pauli_sum(PauliSum::term(2, {{1, 'Z'}}), s);
  EXPECT_EQ(out[0b01], cplx(-1));
  const auto psi = oracle::random_state(3, 4);
  const auto x1 = PauliSum::term(3, {{1, 'X'}});
  const auto twice = apply_pauli_sum(x1 + x1, psi);
  auto once = apply_pauli_sum(x1, psi);
  scale(once, 2.0);
  EXPECT_LT(distance(twice, once), 1e-15);
}

TEST(Pauli, ApplicationMatchesDense) {
  for (int n : {4, 7, 10}) {
    const auto op = random_sum(n, 12, n);
    const auto psi = oracle::random_state(n, n + 1);
    const oracle::Vec want = oracle::dense(op) * oracle::to_eigen(psi);
    EXPECT_LT(oracle::max_diff(oracle::to_eigen(apply_pauli_sum(op, psi)), want), 1e-12) << n;
  }
}

TEST(Pauli, ApplicationIsLinear) {
  const int n = 6;
  const auto op = random_sum(n, 9, 3);
  const auto a = oracle::random_state(n, 1), b = oracle::random_state(n, 2);
  const cplx alpha(0.3, -1.2);
  auto mix = b;
  axpy(alpha, a, mix);
  auto lhs = apply_pauli_sum(op, mix);
  auto rhs = apply_pauli_sum(op, b);
  axpy(alpha, apply_pauli_sum(op, a), rhs);
  EXPECT_LT(distance(lhs, rhs), 1e-12);
}

TEST(Pauli, FermionOperatorsMatchOracle) {
  const int n = 5;
  for (int q = 1; q <= n; ++q) {
    EXPECT_LT((oracle::dense(annihilation(n, q)) - oracle::annihilator(n, q)).norm(), 1e-15);
    EXPECT_LT((oracle::dense(creation(n, q)) - oracle::creator(n, q)).norm(), 1e-15);
  }
}

TEST(Pauli, CanonicalAnticommutation) {
  const int n = 4;
  for (int p = 1; p <= n; ++p)
    for (int q = 1; q <= n; ++q) {
      auto anti = annihilation(n, p) * creation(n, q) + creation(n, q) * annihilation(n, p);
      anti.simplify();
      if (p == q) {
        ASSERT_EQ(anti.size(), 1u);
        EXPECT_EQ(anti.terms()[0].x | anti.terms()[0].z, 0u);
        EXPECT_NEAR(std::abs(anti.terms()[0].coeff - cplx(1)), 0.0, 1e-15);
      } else {
        EXPECT_EQ(anti.size(), 0u);
      }
      auto cc = annihilation(n, p) * annihilation(n, q) + annihilation(n, q) * annihilation(n, p);
      EXPECT_EQ(cc.simplify().size(), 0u);
    }
}

TEST(Pauli, HermiticityAndCommutation) {
  const int n = 3;
  EXPECT_TRUE(is_hermitian(number_op(n, 2)));
  EXPECT_FALSE(is_hermitian(creation(n, 2)));
  const PauliTerm xx{1.0, 0b011, 0}, zz{1.0, 0, 0b011}, zi{1.0, 0, 0b001};
  EXPECT_TRUE(terms_commute(xx, zz));
  EXPECT_FALSE(terms_commute(xx, zi));
}

TEST(Pauli, RejectsBadInput) {
  EXPECT_THROW(PauliSum::term(2, {{3, 'X'}}), UsageError);
  EXPECT_THROW(PauliSum::term(2, {{1, 'X'}, {1, 'Z'}}), UsageError);
  EXPECT_THROW(PauliSum::term(2, {{1, 'Q'}}), UsageError);
  EXPECT_THROW(creation(2, 0), UsageError);
}
