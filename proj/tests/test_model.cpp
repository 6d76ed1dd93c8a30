#include <gtest/gtest.h>

#include "aim/model.hpp"
#include "aim/sim.hpp"
#include "oracles.hpp"

using namespace aim;

namespace {

AimParams single_mode(double eps, double u) {
  AimParams p;
  p.n_imp = 1;
  p.n_bath = 0;
  p.h = Eigen::MatrixXd::Constant(1, 1, eps);
  p.U = Eigen::VectorXd::Constant(1, u);
  p.V = Eigen::MatrixXd(1, 0);
  p.eps = Eigen::VectorXd(0);
  return p;
}

}  // namespace

TEST(SampleParams, BoundsOverManyDraws) {
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const auto p = sample_params(seed, 1, 1);
    ASSERT_GE(p.U[0], 1.0);
    ASSERT_LE(p.U[0], 10.0);
    ASSERT_LE(std::abs(p.h(0, 0)), 5.0);
    ASSERT_LE(std::abs(p.V(0, 0)), 5.0);
    ASSERT_LE(std::abs(p.eps[0]), 5.0);
  }
}

TEST(SampleParams, DeterministicAndSymmetric) {
  const auto a = sample_params(7, 1, 2);
  const auto b = sample_params(7, 1, 2);
  EXPECT_EQ(a.h, b.h);
  EXPECT_EQ(a.U, b.U);
  EXPECT_EQ(a.V, b.V);
  EXPECT_EQ(a.eps, b.eps);
  EXPECT_EQ(a.seed, std::optional<std::uint64_t>(7));
  const auto c = sample_params(9, 2, 3);
  EXPECT_EQ(c.h, c.h.transpose());
  EXPECT_NO_THROW(c.validate());
  EXPECT_THROW(sample_params(1, 0, 1), std::invalid_argument);
  EXPECT_THROW(sample_params(1, 1, 0), std::invalid_argument);
}

TEST(AimParams, ValidateRejectsInconsistentShapes) {
  auto p = single_mode(1, 2);
  p.V = Eigen::MatrixXd::Zero(1, 2);
  EXPECT_THROW(p.validate(), std::invalid_argument);
  auto q = sample_params(1, 2, 1);
  q.h(0, 1) += 1e-6;
  EXPECT_THROW(q.validate(), std::invalid_argument);
}

TEST(JordanWigner, LowestOrbitalHasNoString) {
  const PauliSum c = jw_ladder(0, true, 4);
  EXPECT_EQ(c.coefficient(PauliString::single(0, Pauli::X)), cplx(0.5, 0));
  EXPECT_EQ(c.coefficient(PauliString::single(0, Pauli::Y)), cplx(0, -0.5));
  EXPECT_EQ(c.size(), 2u);
}

TEST(JordanWigner, StringOnLowerIndices) {
  const PauliSum c = jw_ladder(2, true, 4);
  const auto zzx = PauliString::from_factors({{0, Pauli::Z}, {1, Pauli::Z}, {2, Pauli::X}});
  const auto zzy = PauliString::from_factors({{0, Pauli::Z}, {1, Pauli::Z}, {2, Pauli::Y}});
  EXPECT_EQ(c.coefficient(zzx), cplx(0.5, 0));
  EXPECT_EQ(c.coefficient(zzy), cplx(0, -0.5));
}

TEST(JordanWigner, MatchesOccupationOracle) {
  for (int nq : {4, 6}) {
    for (int mu = 0; mu < nq; ++mu) {
      const Eigen::MatrixXcd cd = jw_ladder(mu, true, nq).to_dense();
      const Eigen::MatrixXcd c = jw_ladder(mu, false, nq).to_dense();
      EXPECT_LT((cd - oracle::creation(mu, nq)).norm(), 1e-14);
      EXPECT_LT((cd - c.adjoint()).norm(), 1e-14);
    }
  }
  EXPECT_THROW(jw_ladder(4, true, 4), std::out_of_range);
}

TEST(Hamiltonian, OneImpurityOneBathTermCount) {
  AimParams p;
  p.n_imp = 1;
  p.n_bath = 1;
  p.h = Eigen::MatrixXd::Constant(1, 1, 0.7);
  p.U = Eigen::VectorXd::Constant(1, 3.0);
  p.V = Eigen::MatrixXd::Constant(1, 1, -1.1);
  p.eps = Eigen::VectorXd::Constant(1, 0.4);
  const PauliSum h = build_hamiltonian(p);
  int non_identity = 0;
  for (const auto& [s, c] : h.map())
    if (!s.is_identity()) ++non_identity;
  EXPECT_EQ(non_identity, 9);
  EXPECT_NE(h.constant(), cplx(0, 0));
}

TEST(Hamiltonian, InteractionExpansion) {
  const PauliSum h = build_hamiltonian(single_mode(0.0, 4.0));
  EXPECT_EQ(h.constant(), cplx(1.0, 0));
  EXPECT_EQ(h.coefficient(PauliString::single(0, Pauli::Z)), cplx(-1.0, 0));
  EXPECT_EQ(h.coefficient(PauliString::single(1, Pauli::Z)), cplx(-1.0, 0));
  EXPECT_EQ(h.coefficient(PauliString::from_factors({{0, Pauli::Z}, {1, Pauli::Z}})), cplx(1.0, 0));
}

TEST(Hamiltonian, MatchesDenseOracle) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (auto [ni, nb] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 1}}) {
      const auto p = sample_params(seed, ni, nb);
      const PauliSum h = build_hamiltonian(p);
      EXPECT_TRUE(h.is_hermitian());
      EXPECT_LT((h.to_dense() - oracle::hamiltonian(p)).norm(), 1e-12);
    }
  }
}

TEST(Hamiltonian, CommutesWithSymmetries) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (auto [ni, nb] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 2}}) {
      const auto p = sample_params(seed, ni, nb);
      const Eigen::MatrixXcd h = build_hamiltonian(p).to_dense();
      const auto [np, nm] = symmetry_ops(p.n_qubits());
      const Eigen::MatrixXcd a = np.to_dense();
      const Eigen::MatrixXcd b = nm.to_dense();
      EXPECT_LT((h * a - a * h).norm(), 1e-12);
      EXPECT_LT((h * b - b * h).norm(), 1e-12);
    }
  }
}

TEST(SymmetryOps, ChargeAndSpin) {
  const auto [np, nm] = symmetry_ops(4);
  EXPECT_EQ(np.constant(), cplx(2.0, 0));
  for (int q = 0; q < 4; ++q) EXPECT_EQ(np.coefficient(PauliString::single(q, Pauli::Z)), cplx(-0.5, 0));
  // |0101> read as q3 q2 q1 q0
  EXPECT_NEAR(np.expectation(State::basis(4, 0b0101).amplitudes()).real(), 2.0, 1e-15);
  // both spin-up qubits occupied
  EXPECT_NEAR(nm.expectation(State::basis(4, 0b0011).amplitudes()).real(), 2.0, 1e-15);
  EXPECT_LT((np.to_dense() - oracle::total_charge(4)).norm(), 1e-14);
  EXPECT_LT((nm.to_dense() - oracle::spin_z(4)).norm(), 1e-14);
  EXPECT_THROW(symmetry_ops(3), std::invalid_argument);
}

TEST(Sectors, Dimensions) {
  EXPECT_EQ(sector_dimension({2, 0}, 4), 4u);
  EXPECT_EQ(sector_dimension({1, 1}, 4), 2u);
  EXPECT_THROW(sector_dimension({2, 1}, 4), std::invalid_argument);
  for (int nq : {4, 6, 8}) {
    std::uint64_t total = 0;
    for (const auto& s : all_sectors(nq)) total += sector_dimension(s, nq);
    EXPECT_EQ(total, std::uint64_t{1} << nq);
    std::uint64_t nontrivial = 0;
    for (const auto& s : enumerate_sectors(nq, false)) nontrivial += sector_dimension(s, nq);
    EXPECT_EQ(nontrivial + 2, std::uint64_t{1} << nq);
  }
}

TEST(Sectors, Enumeration) {
  const auto unique = enumerate_sectors(4, true);
  const std::vector<Sector> want = {{1, 1}, {2, 0}, {2, 2}, {3, 1}};
  EXPECT_EQ(unique, want);
  // sum over N = 1..3 of (min(N, 4 - N) + 1)
  EXPECT_EQ(enumerate_sectors(4, false).size(), 7u);
  for (int nq : {4, 6, 8, 10}) {
    // ceil((min(N, Nq - N) + 1) / 2) unique sectors per charge
    std::size_t count = 0;
    for (int n = 1; n < nq; ++n) count += static_cast<std::size_t>((std::min(n, nq - n) + 2) / 2);
    EXPECT_EQ(enumerate_sectors(nq, true).size(), count);
    for (const auto& s : enumerate_sectors(nq, false)) EXPECT_NO_THROW(s.validate(nq));
  }
}

TEST(Sectors, BasisAndLabels) {
  for (const auto& s : enumerate_sectors(6, false)) {
    const auto basis = sector_basis(s, 6);
    EXPECT_EQ(basis.size(), sector_dimension(s, 6));
    for (Basis b : basis) EXPECT_EQ(sector_of(b, 6), s);
  }
}

TEST(ExactDiagonalization, SingleModeFixture) {
  const auto ed = exact_diagonalize(single_mode(1.0, 2.0));
  EXPECT_NEAR(ed.ground_energy, 0.0, 1e-14);
  EXPECT_EQ(ed.ground_sector, (Sector{0, 0}));
  std::vector<double> spectrum;
  for (const auto& sp : ed.spectra)
    for (Eigen::Index k = 0; k < sp.energies.size(); ++k) spectrum.push_back(sp.energies[k]);
  std::sort(spectrum.begin(), spectrum.end());
  ASSERT_EQ(spectrum.size(), 4u);
  EXPECT_NEAR(spectrum[0], 0.0, 1e-14);
  EXPECT_NEAR(spectrum[1], 1.0, 1e-14);
  EXPECT_NEAR(spectrum[2], 1.0, 1e-14);
  EXPECT_NEAR(spectrum[3], 4.0, 1e-14);
  EXPECT_FALSE(ed.degenerate);
}

TEST(ExactDiagonalization, MatchesFullSpace) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    for (int nb : {1, 2}) {
      const auto p = sample_params(seed, 1, nb);
      const auto ed = exact_diagonalize(p);
      const Eigen::MatrixXcd h = oracle::hamiltonian(p);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
      EXPECT_NEAR(ed.ground_energy, es.eigenvalues()[0], 1e-10);
      EXPECT_TRUE(ed.ground_state.is_normalized(1e-12));
      EXPECT_LT(sector_leakage(ed.ground_state, ed.ground_sector), 1e-24);
      const Eigen::VectorXcd hpsi = h * ed.ground_state.amplitudes();
      EXPECT_LT((hpsi - ed.ground_energy * ed.ground_state.amplitudes()).norm(), 1e-9);
      if (!ed.degenerate) {
        const double fidelity = std::abs(es.eigenvectors().col(0).dot(ed.ground_state.amplitudes()));
        EXPECT_NEAR(fidelity, 1.0, 1e-12);
      }
    }
  }
}

TEST(ExactDiagonalization, SpinFlipDegeneracy) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto ed = exact_diagonalize(sample_params(seed, 1, 2));
    for (const auto& a : ed.spectra) {
      for (const auto& b : ed.spectra) {
        if (a.sector.n_total == b.sector.n_total && a.sector.s_z == -b.sector.s_z) {
          EXPECT_NEAR(a.energies[0], b.energies[0], 1e-10);
        }
      }
    }
  }
}

TEST(ExactDiagonalization, SizeGuard) { EXPECT_THROW(exact_diagonalize(sample_params(0, 1, 8)), std::invalid_argument); }

TEST(Resolvent, EigenvectorAndTwoLevel) {
  const PauliSum sx = PauliSum::single(1, 0, Pauli::X);
  EXPECT_NEAR(std::abs(resolvent_reference(sx, State(1), 2.0) - cplx(2.0 / 3.0, 0)), 0.0, 1e-14);
  const PauliSum z = PauliSum::single(1, 0, Pauli::Z);
  const cplx w{0.3, 0.2};
  EXPECT_NEAR(std::abs(resolvent_reference(z, State(1), w) - 1.0 / (w - 1.0)), 0.0, 1e-14);
  EXPECT_THROW(resolvent_reference(z, State(1), 1.0), std::domain_error);
}

TEST(Resolvent, RetardedSign) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto p = sample_params(seed, 1, 1);
    const auto ed = exact_diagonalize(p);
    Rng rng(seed);
    const State phi = oracle::random_state(4, rng);
    for (double w = -10; w <= 10; w += 0.7)
      EXPECT_LT(resolvent_reference(p, phi, cplx{w, 0.1}, ed.ground_energy).imag(), 0.0);
  }
}
