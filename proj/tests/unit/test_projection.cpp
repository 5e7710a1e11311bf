#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>

#include "dense_oracle.hpp"
#include "symvqe/errors.hpp"
#include "symvqe/hubbard.hpp"
#include "symvqe/projection.hpp"
#include "symvqe/trotter.hpp"

using namespace symvqe;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<int> random_perm(int n, std::mt19937_64& rng) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 1);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

// Brute-force fermionic reordering: with |b> = c_{i1}^+ ... c_{ik}^+ |0> for
// ascending occupied modes, g|b> carries the sign of sorting the images.
std::pair<std::uint64_t, int> reorder_oracle(const std::vector<int>& m, std::uint64_t b) {
  std::vector<int> images;
  std::uint64_t out = 0;
  for (int i = 1; i <= static_cast<int>(m.size()); ++i)
    if (b >> (i - 1) & 1) {
      images.push_back(m[i - 1]);
      out |= std::uint64_t{1} << (m[i - 1] - 1);
    }
  int inversions = 0;
  for (std::size_t p = 0; p < images.size(); ++p)
    for (std::size_t q = p + 1; q < images.size(); ++q) inversions += images[p] > images[q];
  return {out, inversions % 2 ? -1 : 1};
}

StateVector normalized(StateVector s) {
  scale(s, 1.0 / norm(s));
  return s;
}

double max_diff(const CVector& a, const CVector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

struct Ladder {
  LadderLattice lat{4, 2};
  Labeling lab = Labeling::SpinUniform;
  SectorSpace space{16, sector_indices(lat, lab)};
  StateVector random(std::uint64_t seed) const {
    return oracle::random_state_on(16, space.basis(), seed);
  }
};

}  // namespace

// ---- Amida lottery ---------------------------------------------------------

TEST(Amida, IdentityIsEmpty) {
  EXPECT_TRUE(amida_decomposition({1, 2, 3, 4, 5, 6}).empty());
}

TEST(Amida, SixModeExample) {
  const std::vector<int> m = {5, 6, 1, 2, 3, 4};
  const auto seq = amida_decomposition(m);
  ASSERT_EQ(seq.size(), 8u);
  std::map<std::pair<int, int>, int> count;
  for (auto t : seq) ++count[t];
  const std::map<std::pair<int, int>, int> want = {
      {{1, 2}, 1}, {{2, 3}, 2}, {{3, 4}, 2}, {{4, 5}, 2}, {{5, 6}, 1}};
  EXPECT_EQ(count, want);
}

TEST(Amida, CompositionReproducesPermutation) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 11;
    const auto m = random_perm(n, rng);
    const auto seq = amida_decomposition(m);
    EXPECT_LE(seq.size(), static_cast<std::size_t>(n * (n - 1) / 2));
    // pos[i-1] tracks where mode i currently sits.
    std::vector<int> at(n);
    std::iota(at.begin(), at.end(), 1);  // at[p-1] = mode at position p
    for (auto [a, b] : seq) {
      ASSERT_EQ(b, a + 1);
      std::swap(at[a - 1], at[b - 1]);
    }
    for (int p = 1; p <= n; ++p) EXPECT_EQ(m[at[p - 1] - 1], p);
  }
  EXPECT_THROW(amida_decomposition({1, 1}), UsageError);
}

TEST(Amida, NetworkMatchesSignOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = random_perm(6, rng);
    const CompiledCircuit net = CompiledCircuit::compile(fswap_network(6, m));
    for (std::uint64_t b = 0; b < 64; ++b) {
      StateVector s = basis_state(6, b);
      net.apply(s);
      const auto [target, sign] = reorder_oracle(m, b);
      for (std::uint64_t k = 0; k < 64; ++k)
        ASSERT_EQ(s[k], cplx(k == target ? sign : 0)) << "trial " << trial << " b " << b;
    }
  }
}

// ---- Spatial group ---------------------------------------------------------

TEST(Spatial, ElementsAreInvolutionsAndMapBonds) {
  LadderLattice lat(4, 2);
  const auto g = c2v_elements(lat, irrep_characters("A1"));
  ASSERT_EQ(g.size(), 4u);
  std::set<std::pair<int, int>> bonds;
  for (const auto& b : lat.bonds()) bonds.insert({b.i, b.j});
  for (const auto& e : g) {
    for (int s = 1; s <= 8; ++s) EXPECT_EQ(e.site_permutation[e.site_permutation[s - 1] - 1], s);
    for (const auto& b : lat.bonds()) {
      auto img = std::minmax(e.site_permutation[b.i - 1], e.site_permutation[b.j - 1]);
      EXPECT_TRUE(bonds.count(img)) << e.name;
    }
  }
  EXPECT_THROW(irrep_characters("E"), ConfigError);
}

TEST(Spatial, IdentityAndVacuum) {
  for (Labeling lab : {Labeling::SpinUniform, Labeling::SpinAlternating}) {
    LadderLattice lat(4, 2);
    const auto g = c2v_elements(lat, irrep_characters("A1"));
    const auto psi = oracle::random_state(16, 2);
    EXPECT_EQ(distance(apply_spatial_g(lat, lab, g[0], psi), psi), 0.0);
    EXPECT_TRUE(spatial_circuit(lat, lab, g[0]).ops.empty());
    for (const auto& e : g)
      EXPECT_EQ(distance(apply_spatial_g(lat, lab, e, zero_state(16)), zero_state(16)), 0.0);
  }
}

TEST(Spatial, ActionIsHomomorphism) {
  for (Labeling lab : {Labeling::SpinUniform, Labeling::SpinAlternating}) {
    LadderLattice lat(4, 2);
    const auto g = c2v_elements(lat, irrep_characters("A1"));
    const auto psi = oracle::random_state(16, 5);
    for (const auto& a : g)
      for (const auto& b : g) {
        std::vector<int> ab(8);
        for (int s = 0; s < 8; ++s) ab[s] = a.site_permutation[b.site_permutation[s] - 1];
        auto it = std::find_if(g.begin(), g.end(),
                               [&](const PointGroupElement& e) { return e.site_permutation == ab; });
        ASSERT_NE(it, g.end());
        const auto lhs = apply_spatial_g(lat, lab, a, apply_spatial_g(lat, lab, b, psi));
        EXPECT_LT(distance(lhs, apply_spatial_g(lat, lab, *it, psi)), 1e-12)
            << a.name << "*" << b.name;
      }
  }
}

TEST(Spatial, CommutesWithHamiltonian) {
  for (Labeling lab : {Labeling::SpinUniform, Labeling::SpinAlternating}) {
    LadderLattice lat(4, 2);
    const auto h = build_hamiltonian(lat, lab, 1.0, 4.0);
    const auto psi = oracle::random_state(16, 6);
    for (const auto& e : c2v_elements(lat, irrep_characters("A1"))) {
      const auto a = apply_pauli_sum(h, apply_spatial_g(lat, lab, e, psi));
      const auto b = apply_spatial_g(lat, lab, e, apply_pauli_sum(h, psi));
      EXPECT_LT(distance(a, b), 1e-10) << e.name;
    }
  }
}

// ---- Rotations -------------------------------------------------------------

TEST(Rotation, ZeroAngleIsEmpty) {
  LadderLattice lat(2, 1);
  EXPECT_TRUE(spin_rotation_y(0.0, lat, Labeling::SpinUniform).ops.empty());
  EXPECT_TRUE(eta_rotation_y(0.0, lat, Labeling::SpinUniform).ops.empty());
}

TEST(Rotation, CircuitsMatchExponentials) {
  for (Labeling lab : {Labeling::SpinUniform, Labeling::SpinAlternating}) {
    for (auto [lx, ly] : {std::pair{2, 1}, std::pair{2, 2}}) {
      LadderLattice lat(lx, ly);
      const auto s = build_spin_ops(lat, lab), e = build_eta_ops(lat, lab);
      for (double ang : {0.3, -1.1, 2.5}) {
        const auto check = [&](const Circuit& c, const PauliSum& gen, const char* what) {
          const oracle::Mat want = oracle::expm_minus_i(oracle::dense(gen), ang);
          EXPECT_LT((oracle::dense(c) - want).norm(), 1e-10)
              << what << " lab=" << labeling_name(lab) << " L=" << lat.n_sites();
        };
        check(spin_rotation_y(ang, lat, lab), s.y, "S_y");
        check(eta_rotation_y(ang, lat, lab), e.y, "eta_y");
        check(spin_rotation_z(ang, lat, lab), s.z, "S_z");
        check(eta_rotation_z(ang, lat, lab), e.z, "eta_z");
      }
    }
  }
}

TEST(Rotation, PiRotationFlipsSpin) {
  LadderLattice lat(2, 1);
  const Labeling lab = Labeling::SpinUniform;
  const int up1 = qubit_of(lat, lab, 1, Spin::Up), dn1 = qubit_of(lat, lab, 1, Spin::Down);
  StateVector s = basis_state(4, std::uint64_t{1} << (up1 - 1));
  apply_circuit(s, spin_rotation_y(kPi, lat, lab));
  EXPECT_NEAR(std::abs(s[std::uint64_t{1} << (dn1 - 1)]), 1.0, 1e-14);
}

// ---- Quadrature ------------------------------------------------------------

TEST(Quadrature, LegendreValues) {
  EXPECT_EQ(legendre_p(0, 0.77), 1.0);
  EXPECT_DOUBLE_EQ(legendre_p(1, 0.3), 0.3);
  EXPECT_NEAR(legendre_p(2, 0.5), -0.125, 1e-15);
  for (double x : {-0.9, -0.2, 0.4, 1.0}) {
    EXPECT_NEAR(legendre_p(2, x), (3 * x * x - 1) / 2, 1e-15);
    EXPECT_NEAR(legendre_p(3, x), (5 * x * x * x - 3 * x) / 2, 1e-15);
  }
  EXPECT_THROW(legendre_p(-1, 0.0), UsageError);
}

TEST(Quadrature, GaussLegendreSmallOrders) {
  const auto g1 = gauss_legendre(1);
  ASSERT_EQ(g1.beta_nodes.size(), 1u);
  EXPECT_NEAR(std::cos(g1.beta_nodes[0]), 0.0, 1e-15);
  EXPECT_NEAR(g1.beta_weights[0], 2.0, 1e-15);
  const auto g2 = gauss_legendre(2);
  EXPECT_NEAR(std::cos(g2.beta_nodes[0]), 1 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(std::cos(g2.beta_nodes[1]), -1 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(g2.beta_weights[0], 1.0, 1e-14);
  EXPECT_NEAR(g2.beta_weights[1], 1.0, 1e-14);
  double x2 = 0.0;
  for (int k = 0; k < 2; ++k) x2 += g2.beta_weights[k] * std::pow(std::cos(g2.beta_nodes[k]), 2);
  EXPECT_NEAR(x2, 2.0 / 3.0, 1e-15);
  EXPECT_THROW(gauss_legendre(0), ConfigError);
  EXPECT_THROW(gauss_legendre(17), ConfigError);
}

TEST(Quadrature, GaussLegendreExactness) {
  for (int n = 1; n <= 16; ++n) {
    const auto g = gauss_legendre(n);
    double wsum = 0.0;
    for (std::size_t k = 0; k < g.beta_nodes.size(); ++k) {
      EXPECT_GT(g.beta_weights[k], 0.0);
      EXPECT_GT(g.beta_nodes[k], 0.0);
      EXPECT_LT(g.beta_nodes[k], kPi);
      if (k) EXPECT_GT(g.beta_nodes[k], g.beta_nodes[k - 1]);
      wsum += g.beta_weights[k];
      EXPECT_NEAR(legendre_p(n, std::cos(g.beta_nodes[k])), 0.0, 1e-13);
    }
    EXPECT_NEAR(wsum, 2.0, 1e-12);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double q = 0.0;
      for (std::size_t k = 0; k < g.beta_nodes.size(); ++k)
        q += g.beta_weights[k] * std::pow(std::cos(g.beta_nodes[k]), d);
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
      EXPECT_NEAR(q, exact, 1e-12) << "n=" << n << " degree " << d;
    }
  }
}

TEST(Quadrature, Lebedev6) {
  const auto g = lebedev6_grid();
  ASSERT_EQ(g.weight.size(), 6u);
  for (double w : g.weight) EXPECT_EQ(w, g.weight[0]);
  EXPECT_NEAR(std::accumulate(g.weight.begin(), g.weight.end(), 0.0), 1.0, 1e-15);
}

TEST(Quadrature, LebedevMatchesProductGrid) {
  LadderLattice lat(2, 1);
  const Labeling lab = Labeling::SpinUniform;
  // Random S_z = 0 state on two sites: N_up = N_down.
  std::vector<std::uint32_t> basis;
  for (std::uint32_t b = 0; b < 16; ++b)
    if (std::popcount(b & 0b0011u) == std::popcount(b & 0b1100u)) basis.push_back(b);
  const auto psi = oracle::random_state_on(4, basis, 9);
  for (int j : {0, 1}) {
    const auto a = apply_su2_projection(lat, lab, Su2::Spin, j, lebedev6_grid(), psi);
    const auto b = apply_su2_projection(lat, lab, Su2::Spin, j, gauss_legendre(4, 4), psi);
    EXPECT_LT(distance(a, b), 1e-8) << j;
  }
}

// ---- Projector -------------------------------------------------------------

TEST(Projector, InactiveIsPlainOverlap) {
  Ladder f;
  const Projector p(f.lat, f.lab, ProjectorSpec{});
  EXPECT_EQ(p.prefactor(), 1.0);
  EXPECT_EQ(p.circuit_count(), 0u);
  const auto a = f.random(1), b = f.random(2);
  const auto h = build_hamiltonian(f.lat, f.lab, 1.0, 4.0);
  EXPECT_LT(std::abs(p.matrix_element(a, b) - inner(a, b)), 1e-15);
  EXPECT_LT(std::abs(p.matrix_element(a, b, &h) - inner(a, apply_pauli_sum(h, b))), 1e-12);
  EXPECT_EQ(distance(p.apply_full(a), a), 0.0);
}

TEST(Projector, FullPrefactor) {
  Ladder f;
  const Projector p(f.lat, f.lab, ProjectorSpec::full());
  EXPECT_DOUBLE_EQ(p.prefactor(), 1.0 / 16.0);
  EXPECT_EQ(p.circuit_count(), 12u);
}

TEST(Projector, ActsAsIdentityOnExactGroundState) {
  Ladder f;
  const auto h = build_hamiltonian(f.lat, f.lab, 1.0, 4.0);
  const auto gs = lanczos_ground_state(h);
  const auto psi = normalized(f.space.embed(f.space.restrict(gs.state)));
  const Projector p(f.lat, f.lab, ProjectorSpec::full());
  const cplx one = p.matrix_element(psi, psi);
  EXPECT_NEAR(one.real(), 1.0, 1e-8);
  EXPECT_NEAR(one.imag(), 0.0, 1e-8);
  EXPECT_NEAR(p.matrix_element(psi, psi, &h).real(), -13.01250315, 1e-7);
}

TEST(Projector, SingletProjectorKillsTriplet) {
  LadderLattice lat(2, 1);
  const Labeling lab = Labeling::SpinUniform;
  const auto bit = [&](int s, Spin sp) { return std::uint64_t{1} << (qubit_of(lat, lab, s, sp) - 1); };
  const auto s2 = build_spin_ops(lat, lab).square;
  ProjectorSpec spec;
  spec.use_spin = true;
  spec.n_polar_spin = 2;
  const Projector p(lat, lab, spec);
  // The two m = 0 combinations of one up and one down electron on two sites.
  int seen_triplet = 0, seen_singlet = 0;
  for (double sign : {1.0, -1.0}) {
    StateVector t(4);
    t[bit(1, Spin::Up) | bit(2, Spin::Down)] = 1 / std::sqrt(2.0);
    t[bit(1, Spin::Down) | bit(2, Spin::Up)] = sign / std::sqrt(2.0);
    const double s2v = expectation(s2, t).real();
    if (std::abs(s2v - 2.0) < 1e-12) {
      ++seen_triplet;
      EXPECT_NEAR(std::abs(p.matrix_element(t, t)), 0.0, 1e-10);
    } else if (std::abs(s2v) < 1e-12) {
      ++seen_singlet;
      EXPECT_NEAR(std::abs(p.matrix_element(t, t) - 1.0), 0.0, 1e-10);
    }
  }
  EXPECT_EQ(seen_triplet, 1);
  EXPECT_EQ(seen_singlet, 1);
}

TEST(Projector, RejectsStatesOutsideTheSector) {
  Ladder f;
  const Projector p(f.lat, f.lab, ProjectorSpec::full());
  const auto bad = oracle::random_state(16, 4);
  EXPECT_THROW(p.matrix_element(bad, bad), UsageError);
}

TEST(Projector, FullFormIsIdempotent) {
  Ladder f;
  const Projector p(f.lat, f.lab, ProjectorSpec::full());
  for (std::uint64_t seed : {1, 2}) {
    const auto psi = f.random(seed);
    const auto p1 = p.apply_full(psi);
    const auto p2 = p.apply_full(p1);
    EXPECT_LE(distance(p2, p1), 1e-8);
  }
}

TEST(Projector, FullFormZeroesCasimirs) {
  Ladder f;
  const auto s = build_spin_ops(f.lat, f.lab), e = build_eta_ops(f.lat, f.lab);
  const auto psi = f.random(3);
  ProjectorSpec spin_only;
  spin_only.use_spin = true;
  const auto ps = normalized(Projector(f.lat, f.lab, spin_only).apply_full(psi));
  EXPECT_LE(std::abs(expectation(s.square, ps)), 1e-10);
  ProjectorSpec eta_only;
  eta_only.use_eta = true;
  const auto pe = normalized(Projector(f.lat, f.lab, eta_only).apply_full(psi));
  EXPECT_LE(std::abs(expectation(e.square, pe)), 1e-10);
  const auto pf = normalized(Projector(f.lat, f.lab, ProjectorSpec::full()).apply_full(psi));
  EXPECT_LE(std::abs(expectation(s.square, pf)), 1e-10);
  EXPECT_LE(std::abs(expectation(e.square, pf)), 1e-10);
  EXPECT_LE(norm(apply_pauli_sum(s.z, pf)), 1e-10);
  EXPECT_LE(norm(apply_pauli_sum(e.z, pf)), 1e-10);
}

TEST(Projector, MatrixFormAgreesWithFullForm) {
  Ladder f;
  const Projector p(f.lat, f.lab, ProjectorSpec::full());
  const auto a = f.random(5), b = f.random(6);
  const cplx full = inner(a, p.apply_full(b));
  EXPECT_LT(std::abs(p.matrix_element(a, b) - full), 1e-10);
}

TEST(Projector, MatrixFormIsHermitian) {
  Ladder f;
  const Projector p(f.lat, f.lab, ProjectorSpec::full());
  const auto a = f.random(7), b = f.random(8);
  EXPECT_LT(std::abs(p.matrix_element(a, b) - std::conj(p.matrix_element(b, a))), 1e-10);
}

// Every Trotter part is itself invariant under the point group and both
// SU(2)s, so the commutator sits at rounding level for every step size,
// inside any O(delta^4) envelope.
TEST(Projector, CommutatorWithTrotterPowerIsFourthOrder) {
  Ladder f;
  const Projector p(f.lat, f.lab, ProjectorSpec::full());
  const auto split = make_trotter_split(f.lat, f.lab, 1.0, 4.0);
  const CVector x = f.space.restrict(f.random(9));
  for (int n : {1, 2}) {
    for (double d : {0.2, 0.1, 0.05}) {
      const PowerEngine eng(split, d, true);
      const CVector a = p.apply_sector(eng.apply(n, x, f.space), f.space);
      const CVector b = eng.apply(n, p.apply_sector(x, f.space), f.space);
      CVector c = a;
      axpy(-1.0, b, c);
      EXPECT_LE(norm2(c), std::max(1e-12, std::pow(d, 4))) << "n=" << n << " delta=" << d;
    }
  }
}

TEST(Projector, CompiledFormMatchesCircuits) {
  Ladder f;
  const Projector p(f.lat, f.lab, ProjectorSpec::full());
  const auto cp = CompiledProjector::build(p, f.space, 42);
  ASSERT_TRUE(cp.has_value());
  EXPECT_GT(cp->rank(), 0u);
  EXPECT_LT(cp->rank(), f.space.dim());
  EXPECT_LE(cp->check_error(), 1e-12);
  const CVector x = f.space.restrict(f.random(10));
  EXPECT_LT(max_diff(cp->apply(x), p.apply_sector(x, f.space)), 1e-12);

  const SectorProjector sp(p, f.space, ProjectorMode::Auto);
  EXPECT_TRUE(sp.compiled());
  const auto a = f.random(11), b = f.random(12);
  const cplx form = dot(sp.bra_image(f.space.restrict(a)), sp.ket_image(f.space.restrict(b)));
  EXPECT_LT(std::abs(form - p.matrix_element(a, b)), 1e-12);
  const SectorProjector circ(p, f.space, ProjectorMode::Circuit);
  EXPECT_FALSE(circ.compiled());
  const cplx form2 =
      dot(circ.bra_image(f.space.restrict(a)), circ.ket_image(f.space.restrict(b)));
  EXPECT_LT(std::abs(form2 - p.matrix_element(a, b)), 1e-12);
}

TEST(Projector, ModeParsing) {
  EXPECT_EQ(parse_projector_mode("auto"), ProjectorMode::Auto);
  EXPECT_EQ(parse_projector_mode("compiled"), ProjectorMode::Compiled);
  EXPECT_THROW(parse_projector_mode("fast"), ConfigError);
}
