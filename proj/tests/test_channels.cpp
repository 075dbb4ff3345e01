#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "rcl/channels.hpp"
#include "rcl/errors.hpp"

namespace {

using namespace rcl;
using rcl_test::oracle_apply;
using rcl_test::oracle_superoperator;
using rcl_test::oracle_trace_norm;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::invalid_argument;
}

TEST(MixedUnitary, ValidatesProbabilitiesAndUnitaries) {
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  EXPECT_EQ(code_of([&] { MixedUnitaryChannel({{0.5, i2}, {0.4, i2}}); }), ErrorCode::invalid_probability_vector);
  EXPECT_EQ(code_of([&] { MixedUnitaryChannel({{1.1, i2}, {-0.1, i2}}); }), ErrorCode::invalid_probability_vector);
  EXPECT_EQ(code_of([&] { MixedUnitaryChannel({{1.0, 2.0 * i2}}); }), ErrorCode::invalid_channel);
  EXPECT_NO_THROW(MixedUnitaryChannel({{0.25, i2}, {0.75, pauli(3)}}));
}

TEST(Nonlinear, RequiresEffectsSummingToIdentity) {
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  EXPECT_THROW(NonlinearChannel({{0.4 * i2, i2}, {0.4 * i2, i2}}), Error);
  EXPECT_NO_THROW(NonlinearChannel({{0.4 * i2, i2}, {0.6 * i2, pauli(1)}}));
}

TEST(Kraus, TracePreservingIsFlaggedNotForced) {
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  EXPECT_TRUE(KrausChannel({i2}).trace_preserving());
  EXPECT_FALSE(KrausChannel({0.5 * i2}).trace_preserving());
}

TEST(Apply, IdentityChannel) {
  Rng rng(1);
  const DensityMatrix rho = rcl_test::random_state(rng, 3);
  EXPECT_LE((rcl::apply(Channel{identity_channel(3)}, rho).matrix() - rho.matrix()).norm(), 1e-14);
}

TEST(Apply, PhaseFlipScalesOffDiagonals) {
  Rng rng(2);
  for (double p : {0.0, 0.1, 0.3, 0.5, 0.9}) {
    const DensityMatrix rho = rcl_test::random_state(rng, 2);
    const ComplexMatrix out = rcl::apply(Channel{phase_flip(p)}, rho).matrix();
    EXPECT_NEAR(std::abs(out(0, 0) - rho.matrix()(0, 0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(out(0, 1) - (1.0 - 2.0 * p) * rho.matrix()(0, 1)), 0.0, 1e-14);
  }
}

TEST(Apply, MixedUnitaryIsUnitalAndMatchesOracle) {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rcl_test::uniform_index(rng, 3));
    const auto c = rcl_test::random_channel(rng, n, 1 + rcl_test::uniform_index(rng, 4));
    const ComplexMatrix i_n = ComplexMatrix::Identity(n, n);
    ASSERT_LE((rcl::apply(c, i_n) - i_n).norm(), 1e-10);
    const ComplexMatrix rho = rcl_test::random_state(rng, n).matrix();
    ASSERT_LE((rcl::apply(c, rho) - oracle_apply(c, rho)).norm(), 1e-12);
  }
}

TEST(Apply, PreservesCone) {
  Rng rng(4);
  const auto c = rcl_test::random_channel(rng, 2, 3);
  for (int t = 0; t < 100; ++t) {
    const ConePoint x = random_cone_point(2, rng);
    EXPECT_NO_THROW(rcl::apply(Channel{c}, x));
  }
}

TEST(Apply, NonlinearPreservesTrace) {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto c = rcl_test::random_nonlinear(rng, 3, 3);
    const ComplexMatrix rho = rcl_test::random_state(rng, 3).matrix();
    ComplexMatrix oracle = ComplexMatrix::Zero(3, 3);
    for (const auto& b : c.branches()) oracle += (b.q * rho).trace().real() * b.u * rho * b.u.adjoint();
    const ComplexMatrix out = rcl::apply(c, rho);
    ASSERT_LE((out - oracle).norm(), 1e-12);
    ASSERT_NEAR(out.trace().real(), 1.0, 1e-10);
  }
}

TEST(Apply, DimensionMismatch) {
  EXPECT_EQ(code_of([] { rcl::apply(phase_flip(0.2), ComplexMatrix::Identity(3, 3)); }), ErrorCode::dimension_mismatch);
}

TEST(TracePreservation, RandomCptChannels) {
  Rng rng(6);
  for (int t = 0; t < 1000; ++t) {
    const auto c = rcl_test::random_channel(rng, 3, 3);
    const Channel kraus = to_kraus(c);
    const ComplexMatrix rho = rcl_test::random_state(rng, 3).matrix();
    ASSERT_NEAR(rcl::apply(kraus, rho).trace().real(), 1.0, 1e-10);
    ASSERT_NEAR(rcl::apply(c, rho).trace().real(), 1.0, 1e-10);
  }
}

TEST(Superoperator, MatchesOracleAndApply) {
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    const auto c = rcl_test::random_channel(rng, 3, 2);
    const ComplexMatrix m = superoperator_matrix(c);
    ASSERT_LE((m - oracle_superoperator(c)).norm(), 1e-12);
    const ComplexMatrix rho = rcl_test::random_state(rng, 3).matrix();
    ASSERT_LE((m * vec(rho) - vec(rcl::apply(c, rho))).norm(), 1e-10);
    ASSERT_LE((superoperator_matrix(to_kraus(c)) - m).norm(), 1e-12);
  }
}

TEST(Superoperator, IdentityAndPhaseFlipExamples) {
  EXPECT_LE((superoperator_matrix(identity_channel(2)) - ComplexMatrix::Identity(4, 4)).norm(), 1e-15);
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 0) = 1.0;
  expected(3, 3) = 1.0;
  EXPECT_LE((superoperator_matrix(phase_flip(0.5)) - expected).norm(), 1e-15);
}

TEST(Superoperator, UnitaryConjugationIsConjKronU) {
  const ComplexMatrix u = random_haar_unitary(2, std::uint64_t{3});
  const MixedUnitaryChannel c({{1.0, u}});
  EXPECT_LE((superoperator_matrix(c) - kron(u.conjugate(), u)).norm(), 1e-14);
}

TEST(Superoperator, NonlinearUnsupported) {
  Rng rng(8);
  const Channel c = rcl_test::random_nonlinear(rng, 2, 2);
  EXPECT_EQ(code_of([&] { superoperator_matrix(c); }), ErrorCode::nonlinear_channel_unsupported);
  EXPECT_EQ(code_of([&] { spectrum(c); }), ErrorCode::nonlinear_channel_unsupported);
  EXPECT_EQ(code_of([&] { fixed_points(c); }), ErrorCode::nonlinear_channel_unsupported);
}

TEST(Spectrum, PhaseFlipHalf) {
  const SuperoperatorSpectrum s = spectrum(phase_flip(0.5));
  ASSERT_EQ(s.eigenvalues.size(), 4u);
  EXPECT_EQ(s.fixed_space_dim, 2);
  EXPECT_LE(std::abs(s.eigenvalues[0] - 1.0), 1e-8);
  EXPECT_LE(std::abs(s.eigenvalues[1] - 1.0), 1e-8);
  EXPECT_LE(std::abs(s.eigenvalues[2]), 1e-12);
  EXPECT_LE(std::abs(s.eigenvalues[3]), 1e-12);
}

TEST(Spectrum, PhaseFlipEigenvaluesOneMinusTwoP) {
  for (double p : {0.1, 0.3, 0.45}) {
    const SuperoperatorSpectrum s = spectrum(phase_flip(p));
    EXPECT_EQ(s.fixed_space_dim, 2);
    EXPECT_NEAR(std::abs(s.kappa), 1.0 - 2.0 * p, 1e-12);
  }
}

TEST(Spectrum, UniformPauliDepolarizes) {
  const SuperoperatorSpectrum s = spectrum(pauli_channel({0.25, 0.25, 0.25, 0.25}));
  EXPECT_EQ(s.fixed_space_dim, 1);
  EXPECT_LE(std::abs(s.kappa), 1e-12);
  EXPECT_LE(std::abs(s.eigenvalues[0] - 1.0), 1e-12);
}

TEST(Spectrum, IdentityAllOnes) {
  const SuperoperatorSpectrum s = spectrum(identity_channel(3));
  EXPECT_EQ(s.fixed_space_dim, 9);
  for (Complex z : s.eigenvalues) EXPECT_LE(std::abs(z - 1.0), 1e-12);
}

TEST(Spectrum, RadiusAtMostOneAndFixedSpaceNonEmpty) {
  Rng rng(9);
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rcl_test::uniform_index(rng, 3));
    const auto c = rcl_test::random_channel(rng, n, 1 + rcl_test::uniform_index(rng, 4));
    const SuperoperatorSpectrum s = spectrum(c);
    for (Complex z : s.eigenvalues) ASSERT_LE(std::abs(z), 1.0 + 1e-9);
    ASSERT_GE(s.fixed_space_dim, 1);
    for (std::size_t i = 1; i < s.eigenvalues.size(); ++i) {
      ASSERT_GE(std::abs(s.eigenvalues[i - 1]) + 1e-12, std::abs(s.eigenvalues[i]));
    }
  }
}

TEST(TraceNormContraction, RandomPairs) {
  Rng rng(10);
  for (int t = 0; t < 1000; ++t) {
    const auto c = rcl_test::random_channel(rng, 3, 3);
    const ComplexMatrix a = rcl_test::random_state(rng, 3).matrix();
    const ComplexMatrix b = rcl_test::random_state(rng, 3).matrix();
    ASSERT_LE(oracle_trace_norm(rcl::apply(c, a) - rcl::apply(c, b)), oracle_trace_norm(a - b) + 1e-9);
  }
}

TEST(FixedPoints, PhaseFlipSpansDiagonal) {
  const Channel c = phase_flip(0.5);
  const auto fps = fixed_points(c);
  ASSERT_EQ(fps.size(), 2u);
  for (const auto& rho : fps) {
    EXPECT_LE(trace_norm(rcl::apply(c, rho.matrix()) - rho.matrix()), 1e-8);
    EXPECT_LE(std::abs(rho.matrix()(0, 1)), 1e-10);
  }
  // diag(a, 1 - a) lies in their span for any a.
  const ComplexMatrix d0 = fps[0].matrix(), d1 = fps[1].matrix();
  Eigen::Matrix2d basis;
  basis << d0(0, 0).real(), d1(0, 0).real(), d0(1, 1).real(), d1(1, 1).real();
  EXPECT_GT(std::abs(basis.determinant()), 1e-6);
  for (double a : {0.0, 0.3, 1.0}) {
    const ComplexMatrix target = Eigen::Vector2cd(a, 1.0 - a).asDiagonal();
    EXPECT_LE(trace_norm(rcl::apply(c, target) - target), 1e-12);
  }
}

TEST(FixedPoints, UniformPauliUnique) {
  const auto fps = fixed_points(pauli_channel({0.25, 0.25, 0.25, 0.25}));
  ASSERT_EQ(fps.size(), 1u);
  EXPECT_LE((fps[0].matrix() - 0.5 * ComplexMatrix::Identity(2, 2)).norm(), 1e-10);
}

TEST(FixedPoints, IdentityHasFullSpan) {
  EXPECT_EQ(fixed_points(identity_channel(2)).size(), 4u);
}

TEST(FixedPoints, AgreeWithCesaroAverage) {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const auto c = rcl_test::random_channel(rng, 2, 2 + rcl_test::uniform_index(rng, 2));
    const auto fps = fixed_points(c);
    const ComplexMatrix rho = rcl_test::random_state(rng, 2).matrix();
    // Power iteration burn-in, then a short Cesaro window.
    ComplexMatrix m = superoperator_matrix(c);
    for (int s = 0; s < 12; ++s) m = (m * m).eval();
    const ComplexMatrix avg = cesaro_average(c, unvec(m * vec(rho), 2), 100);
    for (const auto& f : fps) ASSERT_LE(trace_norm(rcl::apply(Channel{c}, f).matrix() - f.matrix()), 1e-8);
    if (fps.size() == 1) {
      ASSERT_LE(trace_norm(avg - fps[0].matrix()), 1e-6);
    }
    ASSERT_LE(trace_norm(rcl::apply(c, avg) - avg), 1e-3);
  }
}

TEST(FixedPoints, DegenerateChannelsHaveHermitianBasis) {
  // Commuting unitaries share eigenvectors: a fixed space of dimension n.
  Rng rng(12);
  const ComplexMatrix v = random_haar_unitary(3, rng);
  std::vector<UnitaryBranch> branches;
  for (int i = 0; i < 3; ++i) {
    Eigen::Vector3cd phases;
    for (int j = 0; j < 3; ++j) phases(j) = std::polar(1.0, rcl_test::uniform(rng, 0.0, 6.28));
    branches.push_back({1.0 / 3.0 + (i == 2 ? 1e-16 : 0.0), v * phases.asDiagonal() * v.adjoint()});
  }
  const MixedUnitaryChannel c(std::move(branches));
  const auto fps = fixed_points(c);
  EXPECT_EQ(fps.size(), 3u);
  for (const auto& f : fps) EXPECT_LE(trace_norm(rcl::apply(Channel{c}, f).matrix() - f.matrix()), 1e-8);
}

TEST(NamedChannel, Examples) {
  const MixedUnitaryChannel pf0 = named_channel("phase_flip:0");
  Rng rng(13);
  const ComplexMatrix rho = rcl_test::random_state(rng, 2).matrix();
  EXPECT_LE((rcl::apply(pf0, rho) - rho).norm(), 1e-15);
  const MixedUnitaryChannel pauli_u = named_channel("pauli:0.25,0.25,0.25,0.25");
  EXPECT_LE(std::abs(spectrum(pauli_u).kappa), 1e-12);
  const MixedUnitaryChannel r = named_channel("random_mixed_unitary:3:seed4");
  EXPECT_EQ(r.size(), 3u);
  double total = 0.0;
  for (double p : r.probabilities()) total += p;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(named_channel("random_mixed_unitary:3:4").branch(1).u, r.branch(1).u);
  EXPECT_EQ(named_channel("random_mixed_unitary:2:1:3").dim(), 3);
  EXPECT_EQ(code_of([] { named_channel("phase_flip:1.5"); }), ErrorCode::invalid_probability_vector);
  EXPECT_EQ(code_of([] { named_channel("pauli:0.5,0.5,0.5,0.5"); }), ErrorCode::invalid_probability_vector);
  EXPECT_THROW(named_channel("mystery"), Error);
}

TEST(RandomNonlinear, IsAValidChannelAndDeterministic) {
  const NonlinearChannel a = random_nonlinear_channel(3, 4, 77);
  const NonlinearChannel b = random_nonlinear_channel(3, 4, 77);
  ComplexMatrix total = ComplexMatrix::Zero(3, 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.branch(i).q, b.branch(i).q);
    EXPECT_GE(min_eigenvalue(a.branch(i).q), -1e-12);
    total += a.branch(i).q;
  }
  EXPECT_LE((total - ComplexMatrix::Identity(3, 3)).norm(), 1e-10);
}

TEST(ConstantProbability, ReproducesMixedUnitary) {
  Rng rng(14);
  const auto c = rcl_test::random_channel(rng, 2, 3);
  const NonlinearChannel nl = constant_probability_channel(c);
  const ComplexMatrix rho = rcl_test::random_state(rng, 2).matrix();
  EXPECT_LE((rcl::apply(nl, rho) - rcl::apply(c, rho)).norm(), 1e-14);
}

TEST(DepolarizingMix, IsConvexCombination) {
  Rng rng(15);
  const auto inner = rcl_test::random_channel(rng, 2, 2);
  const MixedUnitaryChannel c = depolarizing_mix(inner, 0.3);
  const ComplexMatrix rho = rcl_test::random_state(rng, 2).matrix();
  const ComplexMatrix expected = 0.7 * 0.5 * ComplexMatrix::Identity(2, 2) + 0.3 * oracle_apply(inner, rho);
  EXPECT_LE((rcl::apply(c, rho) - expected).norm(), 1e-12);
}

}  // namespace
