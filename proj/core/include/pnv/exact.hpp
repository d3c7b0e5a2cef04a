#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pnv {

// Coefficient field: the rationals (ch == 0) or a prime field F_p.
// Primes are capped so that products of two reduced residues fit in int64.
struct FieldSpec {
  std::uint64_t ch = 0;

  bool is_rational() const { return ch == 0; }
  bool operator==(const FieldSpec&) const = default;
  std::string name() const;
};

FieldSpec field_rationals();
FieldSpec field_prime(std::uint64_t p);

// One field element.  Keeps both representations; `fld` decides which is live.
class Scalar {
 public:
  Scalar() = default;
  Scalar(FieldSpec f, long long n);          // n mod p, or n/1
  Scalar(FieldSpec f, long long num, long long den);
  static Scalar from_string(FieldSpec f, const std::string& s);  // "a" or "a/b"

  FieldSpec field() const { return fld; }
  bool is_zero() const;
  bool is_one() const;

  Scalar operator+(const Scalar&) const;
  Scalar operator-(const Scalar&) const;
  Scalar operator*(const Scalar&) const;
  Scalar operator-() const;
  Scalar inverse() const;  // aborts on zero
  bool operator==(const Scalar&) const;

  std::string str() const;

  // Live value accessors (only the matching one is meaningful).
  long long fp_value() const { return fp; }
  const mpq_class& q_value() const { return qq; }

 private:
  friend class ExactMatrix;
  FieldSpec fld;
  long long fp = 0;   // reduced to [0, p)
  mpq_class qq = 0;   // canonicalised
};

// Dense matrix over a FieldSpec.  All arithmetic is exact; elimination uses
// deterministic first-nonzero pivoting so that bases and solutions are
// reproducible across runs and platforms.
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(FieldSpec f, int rows, int cols);  // zero matrix
  static ExactMatrix identity(FieldSpec f, int n);

  int rows() const { return nr; }
  int cols() const { return nc; }
  FieldSpec field() const { return fld; }

  Scalar at(int r, int c) const;
  void set(int r, int c, const Scalar& v);
  void set_int(int r, int c, long long num, long long den = 1);
  void add_at(int r, int c, const Scalar& v);
  bool entry_zero(int r, int c) const;

  ExactMatrix operator+(const ExactMatrix&) const;
  ExactMatrix operator-(const ExactMatrix&) const;
  ExactMatrix operator*(const ExactMatrix&) const;
  ExactMatrix operator-() const;
  bool operator==(const ExactMatrix&) const;

  ExactMatrix scaled(const Scalar&) const;
  // Scale row r / column c by +-1 according to signs[r] (used for Koszul
  // bookkeeping; signs entries must be +1 or -1).
  ExactMatrix row_signed(const std::vector<int>& signs) const;
  ExactMatrix col_signed(const std::vector<int>& signs) const;

  ExactMatrix transpose() const;
  bool is_zero() const;

  void set_block(int r0, int c0, const ExactMatrix& m);
  ExactMatrix block(int r0, int c0, int rows, int cols) const;
  // Keep the listed rows/columns, in the given order.
  ExactMatrix select_rows(const std::vector<int>& idx) const;
  ExactMatrix select_cols(const std::vector<int>& idx) const;

  std::string str() const;  // human-readable, for reports and debugging

 private:
  FieldSpec fld;
  int nr = 0, nc = 0;
  std::vector<long long> fp;  // live when fld.ch != 0
  std::vector<mpq_class> qq;  // live when fld.ch == 0

  friend int rank(const ExactMatrix&);
  friend ExactMatrix rref(const ExactMatrix&, std::vector<int>* pivots);
  template <class Ops> friend struct EchelonDriver;
};

ExactMatrix hcat(const ExactMatrix& a, const ExactMatrix& b);
ExactMatrix vcat(const ExactMatrix& a, const ExactMatrix& b);

int rank(const ExactMatrix& m);
// Reduced row echelon form; pivot column indices returned through `pivots`.
ExactMatrix rref(const ExactMatrix& m, std::vector<int>* pivots = nullptr);
// Columns form a basis of the right kernel.  Deterministic: for each free
// column (in increasing order) the vector has a 1 there and pivot-column
// entries filled by back substitution.
ExactMatrix kernel_basis(const ExactMatrix& m);
// Particular solution X of A X = B column by column, or nullopt if any
// column is unsolvable.  Free variables are set to zero, so the solution of
// least support in the free columns is returned.
std::optional<ExactMatrix> solve(const ExactMatrix& a, const ExactMatrix& b);
// Kronecker product, row-major block convention: result((i1,i2),(j1,j2)) =
// a(i1,j1) * b(i2,j2) with composite index i1*b.rows()+i2.
ExactMatrix kron(const ExactMatrix& a, const ExactMatrix& b);
// Companion matrix of the monic polynomial with the given coefficients
// c[0] + c[1] x + ... + c[n-1] x^{n-1} + x^n  (the c's, degree n >= 1).
ExactMatrix companion_matrix(FieldSpec f, const std::vector<Scalar>& c);

// Column space membership: true iff v lies in the span of the columns of m.
bool in_column_span(const ExactMatrix& m, const ExactMatrix& v);

}  // namespace pnv
