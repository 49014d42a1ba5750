#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nsplace::lp {

enum class Sense { LE, GE, EQ };

// Sparse column-oriented LP: minimize obj.x subject to row senses and
// per-column bounds. Structural columns must have finite bounds.
struct Problem {
  std::vector<double> obj, lo, hi;
  std::vector<std::vector<std::pair<int, double>>> cols;  // (row, coef)
  std::vector<Sense> sense;
  std::vector<double> rhs;

  int ncols() const { return int(obj.size()); }
  int nrows() const { return int(rhs.size()); }
  int add_col(double lo_, double hi_, double obj_ = 0);
  int add_row(Sense s, double rhs_);
  void add_entry(int row, int col, double a);
};

enum class Status { kOptimal, kInfeasible, kUnbounded, kStalled };

struct Basis {
  std::vector<int> basic;        // column per row
  std::vector<uint8_t> at_upper; // nonbasic rest position, per column
  bool clean = false;            // no artificial columns referenced
};

struct Result {
  Status status = Status::kStalled;
  double obj = 0;
  std::vector<double> x;  // structural columns only
  int iters = 0;
};

// Dense-inverse bounded-variable simplex. The solver owns scratch state;
// bounds overrides let branch-and-bound tighten binaries per node.
class Simplex {
 public:
  explicit Simplex(const Problem& p);

  Result solve_primal(const std::vector<double>& lo,
                      const std::vector<double>& hi);
  // Dual simplex from a previously optimal basis after bound changes.
  // Falls back to kStalled when the start basis is unusable.
  Result solve_dual(const Basis& start, const std::vector<double>& lo,
                    const std::vector<double>& hi);
  const Basis& last_basis() const { return basis_out_; }

 private:
  struct Col {
    std::vector<std::pair<int, double>> a;
    double lo, hi, obj;
    bool artificial = false;
  };

  void build_columns(const std::vector<double>& lo,
                     const std::vector<double>& hi);
  void refactor();
  void compute_basics_from_nonbasics();
  void ftran(const Col& c, std::vector<double>& w) const;
  void pivot(int row_pos, int enter_col, const std::vector<double>& w);
  bool run_primal(const std::vector<double>& cost, int max_iters, int* iters);
  double reduced_cost(const std::vector<double>& y, int j) const;
  bool validate(double tol) const;

  const Problem& p_;
  int m_ = 0;
  std::vector<Col> cols_;
  std::vector<int> basic_;       // col per row
  std::vector<int> pos_in_basis_;  // row position per col, -1 nonbasic
  std::vector<uint8_t> at_upper_;
  std::vector<double> value_;
  std::vector<double> binv_;  // row-major m*m
  int pivots_since_refactor_ = 0;
  Basis basis_out_;
};

}  // namespace nsplace::lp
