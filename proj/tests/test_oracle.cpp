#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "test_support.hpp"

namespace qcqp {
namespace {

const Vector kRefA{{5.0, 2.0, -1.0, -4.0, -7.0}};
const Vector kRefB{{1.0, 2.0, 1.0, 2.0, 1.0}};

std::size_t count_roots(const std::vector<KktCandidate>& cands) {
  return static_cast<std::size_t>(
      std::count_if(cands.begin(), cands.end(), [](const KktCandidate& k) { return !k.at_pole; }));
}

// Sign changes of f - c on a uniform grid, skipping cells that straddle a pole.
std::size_t grid_sign_changes(const SecularSpec& spec, double lo, double hi, int points) {
  std::vector<double> poles(spec.a.data(), spec.a.data() + spec.size());
  for (double& p : poles) p = -p;
  std::size_t changes = 0;
  double prev_l = lo;
  double prev = secular::eval_f(spec, lo) - spec.c;
  for (int k = 1; k <= points; ++k) {
    const double l = lo + (hi - lo) * k / points;
    const double cur = secular::eval_f(spec, l) - spec.c;
    const bool straddles = std::any_of(poles.begin(), poles.end(),
                                       [&](double p) { return p >= prev_l && p <= l; });
    if (!straddles && (prev > 0.0) != (cur > 0.0)) ++changes;
    prev = cur;
    prev_l = l;
  }
  return changes;
}

TEST(EnumerateKkt, ReferenceDataHasSeveralRoots) {
  const SecularSpec spec = SecularSpec::standard(kRefA, kRefB, 4.0);
  const auto cands = oracle::enumerate_kkt(spec);
  EXPECT_GE(count_roots(cands), 2u);
  const KktCandidate& best = oracle::best(cands);
  EXPECT_GT(best.lambda, 7.0);
  EXPECT_TRUE(best.in_second_order_region);
}

TEST(EnumerateKkt, OneDimensionalClosedForm) {
  const SecularSpec spec = SecularSpec::standard(Vector{{1.0}}, Vector{{1.0}}, 1.0);
  auto cands = oracle::enumerate_kkt(spec);
  ASSERT_EQ(cands.size(), 2u);
  std::sort(cands.begin(), cands.end(),
            [](const KktCandidate& x, const KktCandidate& y) { return x.lambda < y.lambda; });
  EXPECT_NEAR(cands[0].lambda, -2.0, 1e-12);
  EXPECT_NEAR(cands[0].objective, 3.0, 1e-12);
  EXPECT_NEAR(cands[1].lambda, 0.0, 1e-12);
  EXPECT_NEAR(cands[1].objective, -1.0, 1e-12);
  EXPECT_NEAR(oracle::best(cands).objective, -1.0, 1e-12);
}

TEST(EnumerateKkt, HardCaseCandidatesAtPoles) {
  const SecularSpec spec = SecularSpec::standard(Vector{{2.0, 1.0}}, Vector::Zero(2), 4.0);
  const auto cands = oracle::enumerate_kkt(spec);
  std::vector<double> pole_lambdas;
  for (const auto& k : cands) {
    if (k.at_pole) pole_lambdas.push_back(k.lambda);
  }
  std::sort(pole_lambdas.begin(), pole_lambdas.end());
  ASSERT_EQ(pole_lambdas.size(), 2u);
  EXPECT_EQ(pole_lambdas[0], -2.0);
  EXPECT_EQ(pole_lambdas[1], -1.0);
  EXPECT_NEAR(oracle::best(cands).objective, 4.0, 1e-12);
}

TEST(EnumerateKkt, CandidatesAreFeasible) {
  Rng rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 1 + trial % 6;
    Vector a(n);
    for (Index i = 0; i < n; ++i) a(i) = rng.uniform(-4.0, 4.0);
    const SecularSpec spec = SecularSpec::standard(a, rng.normal_vector(n), rng.uniform(0.1, 5.0));
    for (const auto& k : oracle::enumerate_kkt(spec)) {
      EXPECT_LE(std::abs(secular::constraint(spec, k.y)), 1e-8 * std::max(1.0, std::abs(spec.c)));
    }
  }
}

TEST(EnumerateKkt, RootCountMatchesDenseGrid) {
  Rng rng(62);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 1 + trial % 6;
    Vector a(n);
    for (Index i = 0; i < n; ++i) a(i) = rng.uniform(-4.0, 4.0);
    const Vector b = rng.normal_vector(n);
    const double c = rng.uniform(0.2, 5.0);
    const SecularSpec spec = SecularSpec::standard(a, b, c);
    const double reach = 2.0 * b.norm() / std::sqrt(c) + 1.0;
    const double lo = -a.maxCoeff() - reach;
    const double hi = -a.minCoeff() + 1.37 * reach;
    const std::size_t grid = grid_sign_changes(spec, lo, hi, 1000000);
    EXPECT_EQ(count_roots(oracle::enumerate_kkt(spec)), grid) << "trial " << trial;
  }
}

TEST(EnumerateKkt, AdmissibleCandidateIsBest) {
  Rng rng(63);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + trial % 8;
    Vector a(n);
    for (Index i = 0; i < n; ++i) a(i) = rng.uniform(-4.0, 4.0);
    const SecularSpec spec = SecularSpec::standard(a, rng.normal_vector(n), rng.uniform(0.1, 5.0));
    const auto cands = oracle::enumerate_kkt(spec);
    const KktCandidate& best = oracle::best(cands);
    EXPECT_TRUE(best.in_second_order_region);
    const SecularSolution sol = secular::solve(spec);
    EXPECT_LE(std::abs(secular::objective(spec, sol.y) - best.objective),
              1e-8 * (1.0 + std::abs(best.objective)));
  }
}

TEST(EnumerateKkt, IndefiniteMatchesTwoDimensionalBruteForce) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const QcqpInstance inst = instances::gen({ProblemKind::Indefinite, 2, seed});
    const double brute = testing::brute_indefinite_2d(inst.real_problem());
    const OracleResult ref = oracle::solve(inst);
    EXPECT_LE(std::abs(ref.objective - brute), 1e-7 * (1.0 + std::abs(brute))) << "seed " << seed;
  }
}

TEST(EnumerateKkt, ScaleGuard) {
  const SecularSpec spec = SecularSpec::standard(Vector::LinSpaced(26, 1.0, 26.0),
                                                 Vector::Ones(26), 1.0);
  try {
    oracle::enumerate_kkt(spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ScaleGuard);
  }
}

TEST(Best, EmptyListThrows) {
  try {
    oracle::best({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyFeasibleSet);
  }
}

TEST(OracleSolve, StandardTwoDimensional) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const QcqpInstance inst = instances::gen({ProblemKind::Standard, 2, seed});
    const double brute = testing::brute_standard_2d(inst.real_problem());
    EXPECT_LE(std::abs(oracle::solve(inst).objective - brute), 1e-8 * (1.0 + std::abs(brute)));
  }
}

TEST(OracleSolve, ReturnedPointIsFeasibleAndConsistent) {
  for (ProblemKind kind : {ProblemKind::Standard, ProblemKind::RankDeficient,
                           ProblemKind::Indefinite, ProblemKind::Augmented}) {
    const QcqpInstance inst = instances::gen({kind, 7, 4});
    const OracleResult ref = oracle::solve(inst);
    const Vector& x = std::get<Vector>(ref.x);
    const RealQcqp& p = inst.real_problem();
    EXPECT_LE(std::abs(p.constraint(x)), oracle::kValidityBar) << to_string(kind);
    EXPECT_NEAR(p.objective(x), ref.objective, 1e-8 * (1.0 + std::abs(ref.objective)));
    EXPECT_GE(ref.candidate_count, 1u);
  }
}

TEST(SampleFeasible, ZeroRadiusReturnsCenter) {
  RealQcqp p{SymMatrix::identity(2), Vector{{1.0, 0.0}}, 0.0, SymMatrix::identity(2),
             Vector{{1.0, 1.0}}, 2.0};
  const QcqpInstance inst = QcqpInstance::real(ProblemKind::Standard, p);
  EXPECT_NEAR(oracle::sample_feasible(inst, 100, 1), p.objective(Vector{{-1.0, -1.0}}), 1e-12);
}

TEST(SampleFeasible, NeverBeatsSolver) {
  const QcqpInstance inst = instances::gen({ProblemKind::Standard, 3, 31});
  const Solution sol = solver::solve(inst);
  const double scale = 1.0 + std::abs(sol.objective);
  EXPECT_GE(oracle::sample_feasible(inst, 10000, 31), sol.objective - 1e-7 * scale);
}

TEST(SampleFeasible, RayleighQuotientOnUnitSphere) {
  RealQcqp p{SymMatrix::diagonal(Vector{{1.0, 2.0, 3.0}}), Vector::Zero(3), 0.0,
             SymMatrix::identity(3), Vector::Zero(3), -1.0};
  const double sampled =
      oracle::sample_feasible(QcqpInstance::real(ProblemKind::Standard, p), 20000, 3);
  EXPECT_GE(sampled, 1.0);
  EXPECT_LE(sampled, 1.01);
}

TEST(SampleFeasible, EmptySetThrows) {
  RealQcqp p{SymMatrix::identity(2), Vector::Zero(2), 0.0, SymMatrix::identity(2),
             Vector::Zero(2), 1.0};
  try {
    oracle::sample_feasible(QcqpInstance::real(ProblemKind::Standard, p), 10, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyFeasibleSet);
  }
}

TEST(SampleFeasible, AllKindsStayAboveSolver) {
  for (ProblemKind kind : {ProblemKind::Standard, ProblemKind::RankDeficient,
                           ProblemKind::Indefinite, ProblemKind::Augmented,
                           ProblemKind::MatrixComplex}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const QcqpInstance inst = instances::gen({kind, 5, seed});
      const Solution sol = solver::solve(inst);
      const double sampled = oracle::sample_feasible(inst, 2000, seed);
      EXPECT_GE(sampled, sol.objective - 1e-7 * (1.0 + std::abs(sol.objective)))
          << to_string(kind) << " seed " << seed;
    }
  }
}

Solution at_point(const Vector& x) {
  Solution s;
  s.x = x;
  return s;
}

TEST(ClassifyValidity, Thresholds) {
  RealQcqp p{SymMatrix::identity(2), Vector::Zero(2), 0.0, SymMatrix::identity(2),
             Vector::Zero(2), -1.0};
  const QcqpInstance inst = QcqpInstance::real(ProblemKind::Standard, p);
  EXPECT_TRUE(oracle::classify_validity(at_point(Vector{{1.0, 0.0}}), inst).valid);
  const Validity over = oracle::classify_validity(at_point(Vector{{std::sqrt(1.0 + 2e-5), 0.0}}), inst);
  EXPECT_NEAR(over.residual, 2e-5, 1e-15);
  EXPECT_FALSE(over.valid);
  const Validity under =
      oracle::classify_validity(at_point(Vector{{std::sqrt(1.0 + 9.9e-6), 0.0}}), inst);
  EXPECT_NEAR(under.residual, 9.9e-6, 1e-15);
  EXPECT_TRUE(under.valid);
}

TEST(ClassifyValidity, ScaledVariantUsesConstraintScale) {
  RealQcqp p{SymMatrix::identity(1), Vector::Zero(1), 0.0, SymMatrix(100.0 * Matrix::Identity(1, 1)),
             Vector::Zero(1), -100.0};
  const QcqpInstance inst = QcqpInstance::real(ProblemKind::Standard, p);
  const Validity v = oracle::classify_validity(at_point(Vector{{std::sqrt(1.0 + 1e-6)}}), inst);
  EXPECT_FALSE(v.valid);
  EXPECT_TRUE(v.valid_scaled);
}

}  // namespace
}  // namespace qcqp
