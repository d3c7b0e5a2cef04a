#pragma once

#include "pnv/dga.hpp"

#include <optional>

namespace pnv {

// Solver for linear systems whose unknowns are graded maps of a fixed degree.
// Equations are sums of sandwiches  coeff * A * X * B  plus a constant matrix,
// each block required to vanish identically.  Unknown entries are pruned to
// the degree-compatible support before assembly, and only equation rows that
// receive at least one coefficient (or a nonzero constant) are materialised.
class LinearSystem {
 public:
  explicit LinearSystem(FieldSpec f) : fld(f) {}

  // Unknown graded map src -> dst of the given degree.
  int add_map_var(const BimodulePtr& src, const BimodulePtr& dst, int degree);
  // Same, but with raw gradings (for maps into auxiliary spaces such as free
  // covers that are not materialised as bimodules).
  int add_raw_var(const std::vector<int>& dst_deg, const std::vector<int>& src_deg,
                  int degree);

  void begin_equation(int rows, int cols);
  void add_term(int var, const ExactMatrix* A, const ExactMatrix* B,
                const Scalar& coeff);
  void add_term(int var, const ExactMatrix* A, const ExactMatrix* B);
  // Constant C of the equation block: sum(terms) + C = 0.
  void add_const(const ExactMatrix& c);
  void end_equation();

  int var_rows(int var) const { return (int)vars[var].dst_deg.size(); }
  int var_cols(int var) const { return (int)vars[var].src_deg.size(); }
  int support_size(int var) const { return (int)vars[var].entries.size(); }
  int total_support() const { return total_unknowns; }

  // One solution (free coordinates zero), or nullopt.
  std::optional<std::vector<ExactMatrix>> solve_system();

  struct AffineSpace {
    bool solvable = false;
    std::vector<ExactMatrix> particular;            // per var
    std::vector<std::vector<ExactMatrix>> basis;    // homogeneous solutions
  };
  AffineSpace solution_space();

 private:
  struct Var {
    std::vector<int> dst_deg, src_deg;
    int degree = 0;
    std::vector<std::pair<int, int>> entries;  // (i, j) with deg-compatible support
    std::vector<int> entry_index;              // dense (i*cols+j) -> unknown or -1
    int offset = 0;
  };
  struct Trip {
    long long row;
    int col;
    Scalar v;
  };

  FieldSpec fld;
  std::vector<Var> vars;
  int total_unknowns = 0;
  std::vector<Trip> trips;
  std::vector<std::pair<long long, Scalar>> rhs;
  long long row_base = 0;
  int cur_rows = 0, cur_cols = 0;
  bool in_eq = false;

  std::vector<ExactMatrix> reshape(const ExactMatrix& flat_col) const;
};

// Linearity constraints for a map variable, imposed for algebra generators
// only (linearity over products follows).  Left linearity carries the
// map-degree Koszul sign: X(a.m) = (-1)^{d|a|} a.X(m); right linearity is
// strict: X(m.b) = X(m).b.
void add_left_linearity(LinearSystem& sys, int var, const BimodulePtr& src,
                        const BimodulePtr& dst, int degree);
void add_right_linearity(LinearSystem& sys, int var, const BimodulePtr& src,
                         const BimodulePtr& dst);
void add_bilinearity_constraints(LinearSystem& sys, int var,
                                 const BimodulePtr& src, const BimodulePtr& dst,
                                 int degree);

// Appends d_dst X - (-1)^{degree} X d_src = 0 (closedness).
void add_closedness_constraint(LinearSystem& sys, int var,
                               const BimodulePtr& src, const BimodulePtr& dst,
                               int degree);

// Minimal generating set of the algebra (indices of basis elements that,
// together with the unit, generate multiplicatively).
std::vector<int> algebra_generators(const DgAlgebra& a);

}  // namespace pnv
