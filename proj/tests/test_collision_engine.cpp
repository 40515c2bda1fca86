#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "panneal/collision_engine.hpp"
#include "panneal/core_model.hpp"
#include "panneal/dense_oracle.hpp"

using namespace panneal;

namespace {

PointerDensity random_density(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix2c a;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) a(r, c) = cd(gauss(rng), gauss(rng));
  }
  PointerDensity rho;
  rho.m = a * a.adjoint();
  rho.m /= rho.m.trace();
  return rho;
}

QubitPureState random_qubit(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  QubitPureState s;
  s.amp0 = cd(gauss(rng), gauss(rng));
  s.amp1 = cd(gauss(rng), gauss(rng));
  const double inv = 1.0 / std::sqrt(s.norm_sq());
  s.amp0 *= inv;
  s.amp1 *= inv;
  return s;
}

}  // namespace

TEST_CASE("segment generator layout") {
  const SimParams p = make_params(0.5, 4);
  const Matrix4c h = segment_generator(5.0, p);
  const double couple = 0.5 * (2.0 * p.h / p.epsilon);
  const double drive = -p.gamma * 0.5;
  CHECK(h(0, 0).real() == doctest::Approx(couple).epsilon(1e-14));
  CHECK(h(3, 3).real() == doctest::Approx(couple).epsilon(1e-14));
  CHECK(h(1, 1) == cd(0.0));
  CHECK(h(2, 2) == cd(0.0));
  CHECK(h(0, 1).real() == doctest::Approx(drive).epsilon(1e-14));
  CHECK(h(2, 3).real() == doctest::Approx(drive).epsilon(1e-14));
  CHECK(h(0, 2) == cd(0.0));
  CHECK(h(1, 3) == cd(0.0));
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("segment propagators are unitary and block-diagonal in the qubit") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> eps_dist(0.05, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    SimParams p = make_params(eps_dist(rng), 8);
    for (int j : {1, 4, 8}) {
      const SegmentPropagator prop = segment_propagator(j, p);
      CHECK(unitarity_defect<4>(prop.u) < 1e-10);
      CHECK(prop.block_coupling_defect() < 1e-12);
      CHECK(unitarity_defect<2>(Matrix2c(prop.block(0))) < 1e-10);
      CHECK(unitarity_defect<2>(Matrix2c(prop.block(1))) < 1e-10);
    }
  }
  CHECK_THROWS_AS(segment_propagator(0, make_params(0.5, 4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(segment_propagator(5, make_params(0.5, 4)),
                  std::invalid_argument);
}

TEST_CASE("gamma=0 window: pure problem phases on the matched branches") {
  // with the driver off, the generator is diagonal; window j accumulates
  // theta = (2h/eps)(t_j^2 - t_{j-1}^2)/(2T) on the matched (q = k) entries
  SimParams p = make_params(0.5, 4);
  p.gamma = 0.0;
  const SegmentPropagator prop = segment_propagator(2, p);
  const double theta = (2.0 * p.h / p.epsilon) * (5.0 * 5.0 - 2.5 * 2.5) /
                       (2.0 * p.t_final);
  const cd phase = std::exp(cd(0.0, -theta));
  const Matrix2c b1 = prop.block(1);
  CHECK(std::abs(b1(0, 0) - cd(1.0)) < 1e-12);
  CHECK(std::abs(b1(1, 1) - phase) < 1e-12);
  CHECK(std::abs(b1(0, 1)) < 1e-13);
  const Matrix2c b0 = prop.block(0);
  CHECK(std::abs(b0(0, 0) - phase) < 1e-12);
  CHECK(std::abs(b0(1, 1) - cd(1.0)) < 1e-12);
}

TEST_CASE("collide: identity propagator leaves the pointer unchanged") {
  std::mt19937_64 rng(4);
  SegmentPropagator id;
  for (int trial = 0; trial < 5; ++trial) {
    const PointerDensity rho = random_density(rng);
    const QubitPureState chi = random_qubit(rng);
    const PointerDensity out = collide(id, chi, rho);
    CHECK((out.m - rho.m).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("collide on an eigen-branch is unitary conjugation") {
  // eps = 1 puts the qubit exactly on the q=0 branch; purity is preserved
  SimParams p = make_params(1.0, 4);
  const SegmentPropagator prop = segment_propagator(1, p);
  const QubitPureState chi = case_state(1.0, CaseLabel::Phi);
  PointerDensity rho = PointerDensity::plus_state();
  const PointerDensity out = collide(prop, chi, rho);
  CHECK(out.purity() == doctest::Approx(1.0).epsilon(1e-12));
  const Matrix2c direct = prop.block(0) * rho.m * prop.block(0).adjoint();
  CHECK((out.m - direct).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("collide preserves trace, hermiticity and positivity") {
  std::mt19937_64 rng(20240811);
  std::uniform_real_distribution<double> eps_dist(0.05, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    SimParams p = make_params(eps_dist(rng), 4);
    const SegmentPropagator prop = segment_propagator(1 + trial % 4, p);
    const PointerDensity rho = random_density(rng);
    const QubitPureState chi = random_qubit(rng);
    const PointerDensity out = collide(prop, chi, rho);
    CHECK(out.trace_defect() < 1e-12);
    CHECK(out.hermiticity_defect() < 1e-12);
    CHECK(out.min_eigenvalue() > -1e-12);
  }
}

TEST_CASE("collide rejects a trace-breaking propagator") {
  std::mt19937_64 rng(1);
  SegmentPropagator broken;
  broken.u *= 1.5;  // no longer unitary
  CHECK_THROWS_AS(
      collide(broken, random_qubit(rng), PointerDensity::plus_state()),
      ConsistencyError);
}

TEST_CASE("transfer operator: eigen-branch and identity cases") {
  SimParams p = make_params(1.0, 4);
  const SegmentPropagator prop = segment_propagator(2, p);
  const QubitPureState chi = case_state(1.0, CaseLabel::Phi);
  const TransferOperator m = transfer(prop, chi);
  CHECK((m.m - prop.block(0)).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(m.operator_norm() == doctest::Approx(1.0).epsilon(1e-10));

  std::mt19937_64 rng(2);
  SegmentPropagator id;
  const TransferOperator mi = transfer(id, random_qubit(rng));
  CHECK((mi.m - Matrix2c::Identity()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("transfer operators are contractions") {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> eps_dist(0.05, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    SimParams p = make_params(eps_dist(rng), 8);
    const SegmentPropagator prop = segment_propagator(1 + trial % 8, p);
    const TransferOperator m = transfer(prop, random_qubit(rng));
    CHECK(m.operator_norm() <= 1.0 + 1e-10);
  }
}

TEST_CASE("regression anchor: run at eps=1/2, N=4, defaults") {
  const RunResult r = run(make_params(0.5, 4));
  CHECK(r.final_p1 == doctest::Approx(0.710609281382).epsilon(1e-9));
  CHECK(r.final_p0 == doctest::Approx(0.289390718618).epsilon(1e-9));
  CHECK(r.fidelity == doctest::Approx(0.089934642663).epsilon(1e-7));
  CHECK(r.final_p0 + r.final_p1 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.fidelity >= 0.0);
  CHECK(r.fidelity <= 1.0 + 1e-9);
}

TEST_CASE("engine matches the dense oracle at defaults (N=4, eps=1/2)") {
  SimParams p = make_params(0.5, 4);
  const RunResult eng = run(p);
  const DenseRun dense = evolve_full(p, std::vector<double>{p.t_final});
  const PointerDensity rho = dense.pointer_traj.back().second;
  CHECK(std::abs(eng.final_p1 - rho.p1()) < 1e-8);
  CHECK(std::abs(eng.final_p0 - rho.p0()) < 1e-8);
  CHECK(std::abs(eng.fidelity - fidelity_before_after(dense.final_state, p)) <
        1e-8);
}

TEST_CASE("engine matches the dense oracle on fine grids") {
  for (int n : {1, 4}) {
    SimParams p = make_params(0.5, n);
    p.substeps_per_segment = 131072 / n;
    const CouplingSchedule sched(p);
    std::vector<double> boundaries;
    for (int j = 0; j <= n; ++j) boundaries.push_back(sched.boundary(j));
    const RunResult eng = run_sampled(p, boundaries);
    const DenseRun dense = evolve_full(p, boundaries);
    REQUIRE(eng.pointer_samples.size() == dense.pointer_traj.size());
    for (std::size_t i = 0; i < eng.pointer_samples.size(); ++i) {
      const PointerDensity& a = eng.pointer_samples[i].second;
      const PointerDensity& b = dense.pointer_traj[i].second;
      CHECK(std::abs(a.p1() - b.p1()) < 1e-8);
      CHECK(std::abs(a.p0() - b.p0()) < 1e-8);
    }
    CHECK(std::abs(eng.fidelity -
                   fidelity_before_after(dense.final_state, p)) < 1e-8);
  }
}

TEST_CASE("intra-segment sampling matches the dense oracle") {
  SimParams p = make_params(0.5, 2);
  p.substeps_per_segment = 32768;
  const std::vector<double> times = {0.0, 3.0, 5.0, 8.0, 10.0};
  const RunResult eng = run_sampled(p, times);
  const DenseRun dense = evolve_full(p, times);
  REQUIRE(eng.pointer_samples.size() == 5);
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(eng.pointer_samples[i].first == times[i]);
    CHECK(std::abs(eng.pointer_samples[i].second.p1() -
                   dense.pointer_traj[i].second.p1()) < 1e-8);
  }
  // frozen spot value at t = 3.0 (interior of window 1)
  CHECK(eng.pointer_samples[1].second.p1() ==
        doctest::Approx(0.622458169147).epsilon(1e-6));
}

TEST_CASE("boundary samples of run() and run_sampled() coincide bitwise") {
  SimParams p = make_params(0.35, 8);
  const RunResult a = run(p, 2);
  const CouplingSchedule sched(p);
  std::vector<double> times;
  times.push_back(0.0);
  for (int j = 2; j <= 8; j += 2) times.push_back(sched.boundary(j));
  const RunResult b = run_sampled(p, times);
  REQUIRE(a.pointer_samples.size() == b.pointer_samples.size());
  for (std::size_t i = 0; i < a.pointer_samples.size(); ++i) {
    CHECK(a.pointer_samples[i].first == b.pointer_samples[i].first);
    CHECK(a.pointer_samples[i].second.p1() == b.pointer_samples[i].second.p1());
    CHECK(a.pointer_samples[i].second.p0() == b.pointer_samples[i].second.p0());
  }
  CHECK(a.fidelity == b.fidelity);
}

TEST_CASE("eigen-branch runs: fidelity 1, pointer driven to |1>") {
  for (int n : {1, 16}) {
    const RunResult r = run(make_params(1.0, n), n);
    CHECK(std::abs(r.fidelity - 1.0) < 1e-9);
    CHECK(r.final_p1 >= 0.9);
  }
}

TEST_CASE("lambda = 16 run clears the success threshold") {
  const RunResult r = run(make_params(0.25, 256), 256);
  CHECK(r.final_p1 >= 0.9);
  CHECK(r.final_p1 == doctest::Approx(0.922342).epsilon(1e-4));
}

TEST_CASE("pointer samples stay consistent along the run") {
  SimParams p = make_params(0.3, 16);
  const RunResult r = run(p);
  REQUIRE(r.pointer_samples.size() == 17);
  for (const auto& [t, rho] : r.pointer_samples) {
    CHECK(rho.trace_defect() < 1e-10);
    CHECK(rho.hermiticity_defect() < 1e-10);
    CHECK(rho.min_eigenvalue() > -1e-10);
  }
}

TEST_CASE("CasePsi equals the bit-flipped CasePhi run") {
  SimParams phi_params = make_params(0.37, 5);
  SimParams psi_params = phi_params;
  psi_params.case_label = CaseLabel::Psi;
  const RunResult phi = run(phi_params);
  const RunResult psi_direct = run(psi_params);
  const RunResult psi_mapped = run_case_psi_via_symmetry(phi);

  CHECK(psi_mapped.final_p0 == phi.final_p1);
  CHECK(psi_mapped.fidelity == phi.fidelity);

  CHECK(std::abs(psi_direct.final_p0 - phi.final_p1) < 1e-10);
  CHECK(std::abs(psi_direct.fidelity - phi.fidelity) < 1e-10);
  REQUIRE(psi_direct.pointer_samples.size() == psi_mapped.pointer_samples.size());
  for (std::size_t i = 0; i < psi_direct.pointer_samples.size(); ++i) {
    const Matrix2c diff = psi_direct.pointer_samples[i].second.m -
                          psi_mapped.pointer_samples[i].second.m;
    CHECK(diff.cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("run parameter validation") {
  SimParams p = make_params(0.5, 4);
  CHECK_THROWS_AS(run(p, 0), std::invalid_argument);
  p.epsilon = 0.0;
  CHECK_THROWS_AS(run(p), std::invalid_argument);
  p = make_params(0.5, 2);
  CHECK_THROWS_AS(run_sampled(p, std::vector<double>{5.0, 3.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_sampled(p, std::vector<double>{-1.0}),
                  std::invalid_argument);
}
