#ifndef CONROUTE_LP_HPP
#define CONROUTE_LP_HPP

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace conroute {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Minimization LP over bounded columns.  Rows are sparse; column indices in
// row coefficients refer to positions in `cols`.
struct LinearProgram {
  struct Column {
    double lower = 0.0;
    double upper = kInfinity;
    double cost = 0.0;
  };
  enum class Sense : char { Le = '<', Eq = '=', Ge = '>' };
  struct Row {
    std::vector<std::pair<int, double>> coeffs;
    Sense sense = Sense::Le;
    double rhs = 0.0;
  };

  std::vector<Column> cols;
  std::vector<Row> rows;

  int add_col(double lower, double upper, double cost) {
    cols.push_back({lower, upper, cost});
    return static_cast<int>(cols.size()) - 1;
  }
  void add_row(std::vector<std::pair<int, double>> coeffs, Sense sense, double rhs) {
    rows.push_back({std::move(coeffs), sense, rhs});
  }
};

enum class LpStatus : uint8_t { Optimal, Infeasible, Unbounded };
const char* to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;  // one value per column when Optimal
  double objective = 0.0;
  int64_t iterations = 0;
};

// Largest row or bound violation of x; used for verification.
double max_violation(const LinearProgram& lp, const std::vector<double>& x);

struct SolveLpOptions {
  double feas_tol = 1e-6;   // feasibility tolerance
  double opt_tol = 1e-7;    // reduced-cost optimality tolerance
  int64_t iter_limit = 50'000'000;
  int max_dense_rows = 4096;  // refuse larger monolithic bases
};

// Solves the LP with the built-in primal simplex.  Structural reductions
// (penalty-slack absorption, independent-block decomposition behind soft
// penalty rows) are applied first when they provably preserve the optimum;
// throws std::runtime_error when the irreducible core exceeds
// max_dense_rows or on numerical breakdown.
LpSolution solve_lp(const LinearProgram& lp, const SolveLpOptions& opt = {});

}  // namespace conroute

#endif
