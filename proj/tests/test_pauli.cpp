#include <gtest/gtest.h>

#include "aim/pauli.hpp"
#include "oracles.hpp"

using namespace aim;

TEST(PauliString, PhaseConvention) {
  const auto y = PauliString::single(0, Pauli::Y);
  // Y|0> = i|1>, Y|1> = -i|0>
  EXPECT_EQ(y.phase_on(0), cplx(0, 1));
  EXPECT_EQ(y.phase_on(1), cplx(0, -1));
  EXPECT_EQ(PauliString::single(2, Pauli::Z).phase_on(0b100), cplx(-1, 0));
}

TEST(PauliString, ProductsMatchDenseMatrices) {
  const std::vector<PauliString> strings = {
      PauliString::from_factors({{0, Pauli::X}, {1, Pauli::Y}}),
      PauliString::from_factors({{0, Pauli::Y}, {2, Pauli::Z}}),
      PauliString::from_factors({{1, Pauli::Z}, {2, Pauli::X}}),
      PauliString::from_factors({{0, Pauli::Z}, {1, Pauli::Y}, {2, Pauli::Y}}),
  };
  for (const auto& a : strings) {
    for (const auto& b : strings) {
      const auto [phase, c] = multiply(a, b);
      const Eigen::MatrixXcd lhs = PauliSum::from_string(3, a).to_dense() * PauliSum::from_string(3, b).to_dense();
      const Eigen::MatrixXcd rhs = phase * PauliSum::from_string(3, c).to_dense();
      EXPECT_LT((lhs - rhs).norm(), 1e-14);
    }
  }
}

TEST(PauliSum, DenseMatchesKroneckerOracle) {
  const auto s = PauliString::from_factors({{0, Pauli::X}, {2, Pauli::Y}, {3, Pauli::Z}});
  const Eigen::MatrixXcd want = oracle::pauli('X', 0, 4) * oracle::pauli('Y', 2, 4) * oracle::pauli('Z', 3, 4);
  EXPECT_LT((PauliSum::from_string(4, s).to_dense() - want).norm(), 1e-14);
}

TEST(PauliSum, CanonicalizationIsOrderIndependentAndIdempotent) {
  const auto zx = PauliString::from_factors({{0, Pauli::Z}, {1, Pauli::X}});
  const auto yy = PauliString::from_factors({{0, Pauli::Y}, {1, Pauli::Y}});
  PauliSum a(2, {{1.0, zx}, {2.0, yy}, {-1.0, zx}, {0.5, yy}});
  PauliSum b(2, {{0.5, yy}, {2.0, yy}});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 1u);
  PauliSum c = a;
  c += PauliSum(2);
  EXPECT_EQ(c, a);
}

TEST(PauliSum, DropsZeroTerms) {
  PauliSum a = PauliSum::single(3, 1, Pauli::Z) - PauliSum::single(3, 1, Pauli::Z);
  EXPECT_TRUE(a.empty());
}

TEST(PauliSum, ApplyAndExpectationMatchDense) {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<PauliTerm> terms;
    for (int k = 0; k < 6; ++k) {
      PauliString s{rng.bits() & 0xF, rng.bits() & 0xF};
      terms.push_back({cplx{rng.uniform(-1, 1), rng.uniform(-1, 1)}, s});
    }
    PauliSum op(4, terms);
    const State psi = oracle::random_state(4, rng);
    const Eigen::VectorXcd want = op.to_dense() * psi.amplitudes();
    EXPECT_LT((op.apply(psi.amplitudes()) - want).norm(), 1e-12);
    EXPECT_NEAR(std::abs(op.expectation(psi.amplitudes()) - psi.amplitudes().dot(want)), 0.0, 1e-12);
    EXPECT_LT((Eigen::MatrixXcd(op.to_sparse()) - op.to_dense()).norm(), 1e-13);
  }
}

TEST(PauliSum, HermitianExpectationIsReal) {
  Rng rng(3);
  PauliSum op(3, {{0.7, {0b011, 0b001}}, {-1.2, {0, 0b110}}, {0.3, {0b100, 0b100}}});
  ASSERT_TRUE(op.is_hermitian());
  for (int i = 0; i < 20; ++i) {
    const State psi = oracle::random_state(3, rng);
    EXPECT_NEAR(op.expectation(psi.amplitudes()).imag(), 0.0, 1e-12);
  }
}

TEST(PauliSum, AdjointOfProduct) {
  PauliSum a(2, {{cplx(0, 1), {0b01, 0b00}}, {2.0, {0b10, 0b11}}});
  PauliSum b(2, {{1.5, {0b11, 0b01}}});
  EXPECT_EQ((a * b).adjoint(), b.adjoint() * a.adjoint());
}

TEST(PauliSum, MatrixInBasisMatchesDenseBlock) {
  PauliSum op(3, {{0.5, {0b011, 0}}, {0.5, {0b011, 0b011}}, {1.0, {0, 0b100}}});
  const std::vector<Basis> basis = {0b001, 0b010, 0b101, 0b110};
  const Eigen::MatrixXcd full = op.to_dense();
  const Eigen::MatrixXcd block = op.matrix_in_basis(basis);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j)
      EXPECT_NEAR(std::abs(block(i, j) - full(basis[i], basis[j])), 0.0, 1e-14);
}
