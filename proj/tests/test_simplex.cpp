#include <doctest.h>

#include <cmath>
#include <vector>

#include "conroute/lp.hpp"
#include "conroute/rng.hpp"
#include "conroute/simplex.hpp"

using namespace conroute;
using Sense = LinearProgram::Sense;

namespace {

// Checks that no feasible direction from x improves the objective, by random
// probing: for a convex problem a local optimum is global, so any improving
// feasible point refutes optimality.
void probe_local_optimality(const LinearProgram& lp, const std::vector<double>& x, double obj,
                            uint64_t seed) {
  Rng rng(seed);
  size_t n = lp.cols.size();
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> dir(n);
    for (size_t j = 0; j < n; ++j) dir[j] = rng.next_unit() * 2.0 - 1.0;
    // Binary search the largest feasible step along dir, up to 1e3.
    double lostep = 0.0, histep = 1e3;
    auto feasible_at = [&](double t) {
      std::vector<double> y(n);
      for (size_t j = 0; j < n; ++j) y[j] = x[j] + t * dir[j];
      return max_violation(lp, y) <= 1e-9;
    };
    if (!feasible_at(1e-6)) continue;
    for (int it = 0; it < 40; ++it) {
      double mid = (lostep + histep) / 2;
      if (feasible_at(mid)) lostep = mid;
      else histep = mid;
    }
    if (lostep <= 0) continue;
    double newobj = 0.0;
    for (size_t j = 0; j < n; ++j) newobj += lp.cols[j].cost * (x[j] + lostep * dir[j]);
    CHECK(newobj >= obj - 1e-6 * (1.0 + std::abs(obj)));
  }
}

}  // namespace

TEST_CASE("simple maximization via negated costs") {
  // max 3x + 2y st x + y <= 4, x <= 2, x,y >= 0  ->  x=2, y=2, value 10.
  LinearProgram lp;
  int x = lp.add_col(0, kInfinity, -3);
  int y = lp.add_col(0, kInfinity, -2);
  lp.add_row({{x, 1}, {y, 1}}, Sense::Le, 4);
  lp.add_row({{x, 1}}, Sense::Le, 2);
  SimplexResult r = simplex_solve(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-10.0));
  CHECK(r.x[static_cast<size_t>(x)] == doctest::Approx(2.0));
  CHECK(r.x[static_cast<size_t>(y)] == doctest::Approx(2.0));
}

TEST_CASE("equality system pins the solution") {
  // x + y = 3, x - y = 1 -> x=2, y=1 regardless of cost.
  LinearProgram lp;
  int x = lp.add_col(0, kInfinity, 5);
  int y = lp.add_col(0, kInfinity, 7);
  lp.add_row({{x, 1}, {y, 1}}, Sense::Eq, 3);
  lp.add_row({{x, 1}, {y, -1}}, Sense::Eq, 1);
  SimplexResult r = simplex_solve(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.x[static_cast<size_t>(x)] == doctest::Approx(2.0));
  CHECK(r.x[static_cast<size_t>(y)] == doctest::Approx(1.0));
  CHECK(r.objective == doctest::Approx(17.0));
}

TEST_CASE("bounded variables at their efficient bounds") {
  // min -x + y with 1 <= x <= 3, 0 <= y <= 2, x + y >= 2.
  LinearProgram lp;
  int x = lp.add_col(1, 3, -1);
  int y = lp.add_col(0, 2, 1);
  lp.add_row({{x, 1}, {y, 1}}, Sense::Ge, 2);
  SimplexResult r = simplex_solve(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.x[static_cast<size_t>(x)] == doctest::Approx(3.0));
  CHECK(r.x[static_cast<size_t>(y)] == doctest::Approx(0.0));
  CHECK(r.objective == doctest::Approx(-3.0));
}

TEST_CASE("negative lower bounds and free variables") {
  // min x + 2y, x >= -5 free-ish, y in [-2, 2], x + y = -3.
  LinearProgram lp;
  int x = lp.add_col(-kInfinity, kInfinity, 1);
  int y = lp.add_col(-2, 2, 2);
  lp.add_row({{x, 1}, {y, 1}}, Sense::Eq, -3);
  SimplexResult r = simplex_solve(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  // x = -3 - y, objective = -3 + y, minimized at y = -2 -> x = -1, obj -5.
  CHECK(r.x[static_cast<size_t>(y)] == doctest::Approx(-2.0));
  CHECK(r.x[static_cast<size_t>(x)] == doctest::Approx(-1.0));
  CHECK(r.objective == doctest::Approx(-5.0));
}

TEST_CASE("infeasible and unbounded verdicts") {
  LinearProgram bad;
  int x = bad.add_col(0, 2, 1);
  bad.add_row({{x, 1}}, Sense::Ge, 5);
  CHECK(simplex_solve(bad).status == LpStatus::Infeasible);

  LinearProgram ray;
  int u = ray.add_col(0, kInfinity, -2);
  int v = ray.add_col(0, kInfinity, 1);
  ray.add_row({{u, 1}, {v, -1}}, Sense::Le, 1);
  // Along (1,1) the row is tight-invariant and the objective falls by 1.
  CHECK(simplex_solve(ray).status == LpStatus::Unbounded);

  LinearProgram rowfree;
  rowfree.add_col(0, kInfinity, -1);
  CHECK(simplex_solve(rowfree).status == LpStatus::Unbounded);

  LinearProgram boxed;
  boxed.add_col(0, 3, -1);
  boxed.add_col(1, 2, 2);
  SimplexResult r = simplex_solve(boxed);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-1.0));
}

TEST_CASE("degenerate pivoting terminates") {
  // A classically degenerate corner: many redundant constraints through one
  // vertex.
  LinearProgram lp;
  int x = lp.add_col(0, kInfinity, -1);
  int y = lp.add_col(0, kInfinity, -1);
  lp.add_row({{x, 1}, {y, 2}}, Sense::Le, 4);
  lp.add_row({{x, 2}, {y, 1}}, Sense::Le, 4);
  lp.add_row({{x, 1}, {y, 1}}, Sense::Le, 4);
  lp.add_row({{x, 3}, {y, 3}}, Sense::Le, 8);
  lp.add_row({{x, 1}, {y, 3}}, Sense::Le, 4);
  lp.add_row({{x, 3}, {y, 1}}, Sense::Le, 4);
  SimplexResult r = simplex_solve(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-2.0));  // x = y = 1
}

TEST_CASE("random LPs: feasibility and probed optimality") {
  Rng rng(2024);
  int solved = 0;
  for (int inst = 0; inst < 60; ++inst) {
    LinearProgram lp;
    int n = static_cast<int>(rng.next_int(2, 6));
    int m = static_cast<int>(rng.next_int(1, 5));
    for (int j = 0; j < n; ++j) {
      double lo = static_cast<double>(rng.next_int(-3, 2));
      double hi = lo + static_cast<double>(rng.next_int(1, 6));
      lp.add_col(lo, hi, static_cast<double>(rng.next_int(-5, 5)));
    }
    for (int i = 0; i < m; ++i) {
      std::vector<std::pair<int, double>> cf;
      for (int j = 0; j < n; ++j) {
        int a = static_cast<int>(rng.next_int(-2, 2));
        if (a != 0) cf.push_back({j, static_cast<double>(a)});
      }
      if (cf.empty()) cf.push_back({0, 1.0});
      int sdraw = static_cast<int>(rng.next_below(3));
      Sense s = sdraw == 0 ? Sense::Le : (sdraw == 1 ? Sense::Ge : Sense::Eq);
      double rhs = static_cast<double>(rng.next_int(-6, 8));
      lp.add_row(std::move(cf), s, rhs);
    }
    SimplexResult r = simplex_solve(lp);
    if (r.status != LpStatus::Optimal) continue;  // infeasible draws are fine
    ++solved;
    CHECK(max_violation(lp, r.x) <= 1e-6);
    probe_local_optimality(lp, r.x, r.objective, 1000 + static_cast<uint64_t>(inst));
  }
  CHECK(solved > 10);  // the generator must produce enough feasible cases
}

TEST_CASE("warm starts reproduce the optimum after a bound change") {
  LinearProgram lp;
  int x = lp.add_col(0, 4, -2);
  int y = lp.add_col(0, 4, -1);
  int z = lp.add_col(0, 4, -3);
  lp.add_row({{x, 1}, {y, 1}, {z, 1}}, Sense::Le, 6);
  lp.add_row({{x, 1}, {z, -1}}, Sense::Le, 2);
  SimplexResult cold = simplex_solve(lp);
  REQUIRE(cold.status == LpStatus::Optimal);

  // Tighten a bound and warm start from the previous basis.
  lp.cols[static_cast<size_t>(z)].upper = 1.0;
  SimplexResult warm = simplex_solve(lp, {}, &cold.vstat);
  SimplexResult fresh = simplex_solve(lp);
  REQUIRE(warm.status == LpStatus::Optimal);
  REQUIRE(fresh.status == LpStatus::Optimal);
  CHECK(warm.objective == doctest::Approx(fresh.objective));

  // Garbage warm data must not break correctness either.
  std::vector<VStat> junk(lp.cols.size() + lp.rows.size(), VStat::NbLower);
  SimplexResult fallback = simplex_solve(lp, {}, &junk);
  REQUIRE(fallback.status == LpStatus::Optimal);
  CHECK(fallback.objective == doctest::Approx(fresh.objective));
}

TEST_CASE("solve_lp absorbs penalty slacks exactly") {
  // min x + 1000 u  st  x - u <= 2, x in [3, 5], u >= 0.
  LinearProgram lp;
  int x = lp.add_col(3, 5, 1);
  int u = lp.add_col(0, kInfinity, 1000);
  lp.add_row({{x, 1}, {u, -1}}, Sense::Le, 2);
  LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.x[static_cast<size_t>(x)] == doctest::Approx(3.0));
  CHECK(s.x[static_cast<size_t>(u)] == doctest::Approx(1.0));
  CHECK(s.objective == doctest::Approx(1003.0));

  SimplexResult direct = simplex_solve(lp);
  REQUIRE(direct.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(direct.objective));
}

TEST_CASE("solve_lp decomposes independent blocks behind soft rows") {
  // Two independent 2-variable blocks plus a soft coupling row with an
  // overflow absorber.  Loose coupling: certificate holds, decomposition
  // answer must equal the monolithic answer.
  auto build = [](double couple_rhs) {
    LinearProgram lp;
    int x1 = lp.add_col(0, 10, 3);
    int x2 = lp.add_col(0, 10, 1);
    int y1 = lp.add_col(0, 10, 2);
    int y2 = lp.add_col(0, 10, 5);
    int v = lp.add_col(0, kInfinity, 1e6);
    lp.add_row({{x1, 1}, {x2, 1}}, Sense::Ge, 4);   // block A demand
    lp.add_row({{y1, 1}, {y2, 1}}, Sense::Ge, 6);   // block B demand
    lp.add_row({{x2, 1}, {y1, 1}, {v, -1}}, Sense::Le, couple_rhs);  // soft link
    return lp;
  };
  for (double rhs : {20.0, 10.0, 7.0, 3.0, 0.5}) {
    CAPTURE(rhs);
    LinearProgram lp = build(rhs);
    LpSolution dec = solve_lp(lp);
    SimplexResult mono = simplex_solve(lp);
    REQUIRE(dec.status == LpStatus::Optimal);
    REQUIRE(mono.status == LpStatus::Optimal);
    CHECK(dec.objective == doctest::Approx(mono.objective));
    CHECK(max_violation(lp, dec.x) <= 1e-6);
  }
}

TEST_CASE("solve_lp random penalty networks match the monolithic answer") {
  Rng rng(99);
  for (int inst = 0; inst < 40; ++inst) {
    LinearProgram lp;
    int blocks = static_cast<int>(rng.next_int(2, 4));
    std::vector<int> firsts;
    for (int b = 0; b < blocks; ++b) {
      int x1 = lp.add_col(0, 12, static_cast<double>(rng.next_int(1, 9)));
      int x2 = lp.add_col(0, 12, static_cast<double>(rng.next_int(1, 9)));
      lp.add_row({{x1, 1}, {x2, 1}}, Sense::Ge, static_cast<double>(rng.next_int(2, 9)));
      // Split row with a costed overflow u on x1.
      int uu = lp.add_col(0, kInfinity, 500);
      lp.add_row({{x1, 1}, {uu, -1}}, Sense::Le, static_cast<double>(rng.next_int(1, 5)));
      firsts.push_back(x1);
    }
    // One soft row over the first column of every block.
    std::vector<std::pair<int, double>> cf;
    for (int f : firsts) cf.push_back({f, 1.0});
    int v = lp.add_col(0, kInfinity, 1e6);
    cf.push_back({v, -1.0});
    lp.add_row(std::move(cf), Sense::Le, static_cast<double>(rng.next_int(1, 14)));

    LpSolution dec = solve_lp(lp);
    SimplexResult mono = simplex_solve(lp);
    REQUIRE(dec.status == mono.status);
    if (dec.status != LpStatus::Optimal) continue;
    CHECK(dec.objective ==
          doctest::Approx(mono.objective).epsilon(1e-7));
    CHECK(max_violation(lp, dec.x) <= 1e-6);
  }
}

TEST_CASE("solve_lp propagates infeasibility and trivial cases") {
  LinearProgram bad;
  int x = bad.add_col(0, 1, 1);
  int y = bad.add_col(0, 1, 1);
  bad.add_row({{x, 1}}, Sense::Ge, 3);
  bad.add_row({{y, 1}}, Sense::Ge, 0);
  CHECK(solve_lp(bad).status == LpStatus::Infeasible);

  LinearProgram empty;
  LpSolution s = solve_lp(empty);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(0.0));

  LinearProgram rowless;
  rowless.add_col(2, 5, 3);
  rowless.add_col(-1, 5, -2);
  LpSolution t = solve_lp(rowless);
  REQUIRE(t.status == LpStatus::Optimal);
  CHECK(t.objective == doctest::Approx(2 * 3 + 5 * -2));
}
