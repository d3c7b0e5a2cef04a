#include "pnv/exact.hpp"

#include <sstream>
#include <stdexcept>
#include <utility>

namespace pnv {

namespace {

long long emod(long long a, long long p) {
  long long r = a % p;
  return r < 0 ? r + p : r;
}

long long fp_invert(long long a, long long p) {
  a = emod(a, p);
  if (a == 0) throw std::runtime_error("division by zero in F_p");
  long long t = 0, nt = 1, r = p, nr = a;
  while (nr != 0) {
    long long q = r / nr;
    t -= q * nt; std::swap(t, nt);
    r -= q * nr; std::swap(r, nr);
  }
  if (r != 1) throw std::runtime_error("non-invertible element in F_p");
  return emod(t, p);
}

bool is_prime_u64(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

struct FpOps {
  long long p;
  using T = long long;
  bool is_zero(T a) const { return a == 0; }
  T add(T a, T b) const { return emod(a + b, p); }
  T sub(T a, T b) const { return emod(a - b, p); }
  T mul(T a, T b) const { return emod(a * b, p); }
  T neg(T a) const { return emod(-a, p); }
  T inv(T a) const { return fp_invert(a, p); }
};

struct QOps {
  using T = mpq_class;
  bool is_zero(const T& a) const { return sgn(a) == 0; }
  T add(const T& a, const T& b) const { return a + b; }
  T sub(const T& a, const T& b) const { return a - b; }
  T mul(const T& a, const T& b) const { return a * b; }
  T neg(const T& a) const { return -a; }
  T inv(const T& a) const {
    if (sgn(a) == 0) throw std::runtime_error("division by zero in Q");
    return 1 / a;
  }
};

}  // namespace

std::string FieldSpec::name() const {
  return is_rational() ? "Q" : "F" + std::to_string(ch);
}

FieldSpec field_rationals() { return FieldSpec{0}; }

FieldSpec field_prime(std::uint64_t p) {
  if (p >= (1ull << 31))
    throw std::runtime_error("prime too large (must fit below 2^31)");
  if (!is_prime_u64(p))
    throw std::runtime_error("characteristic " + std::to_string(p) + " is not prime");
  return FieldSpec{p};
}

// ---------------------------------------------------------------- Scalar --

Scalar::Scalar(FieldSpec f, long long n) : fld(f) {
  if (fld.is_rational()) qq = mpq_class(mpz_class(static_cast<long>(n)));
  else fp = emod(n, (long long)fld.ch);
}

Scalar::Scalar(FieldSpec f, long long num, long long den) : fld(f) {
  if (den == 0) throw std::runtime_error("zero denominator");
  if (fld.is_rational()) {
    qq = mpq_class(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
    qq.canonicalize();
  } else {
    long long p = (long long)fld.ch;
    fp = emod(emod(num, p) * fp_invert(den, p), p);
  }
}

Scalar Scalar::from_string(FieldSpec f, const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos)
    return Scalar(f, std::stoll(s));
  return Scalar(f, std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

bool Scalar::is_zero() const {
  return fld.is_rational() ? sgn(qq) == 0 : fp == 0;
}

bool Scalar::is_one() const {
  return fld.is_rational() ? qq == 1 : fp == 1;
}

Scalar Scalar::operator+(const Scalar& o) const {
  Scalar r; r.fld = fld;
  if (fld.is_rational()) r.qq = qq + o.qq;
  else r.fp = emod(fp + o.fp, (long long)fld.ch);
  return r;
}

Scalar Scalar::operator-(const Scalar& o) const {
  Scalar r; r.fld = fld;
  if (fld.is_rational()) r.qq = qq - o.qq;
  else r.fp = emod(fp - o.fp, (long long)fld.ch);
  return r;
}

Scalar Scalar::operator*(const Scalar& o) const {
  Scalar r; r.fld = fld;
  if (fld.is_rational()) r.qq = qq * o.qq;
  else r.fp = emod(fp * o.fp, (long long)fld.ch);
  return r;
}

Scalar Scalar::operator-() const {
  Scalar r; r.fld = fld;
  if (fld.is_rational()) r.qq = -qq;
  else r.fp = emod(-fp, (long long)fld.ch);
  return r;
}

Scalar Scalar::inverse() const {
  Scalar r; r.fld = fld;
  if (fld.is_rational()) r.qq = QOps{}.inv(qq);
  else r.fp = fp_invert(fp, (long long)fld.ch);
  return r;
}

bool Scalar::operator==(const Scalar& o) const {
  return fld.is_rational() ? qq == o.qq : fp == o.fp;
}

std::string Scalar::str() const {
  if (fld.is_rational()) return qq.get_str();
  return std::to_string(fp);
}

// ----------------------------------------------------------- ExactMatrix --

ExactMatrix::ExactMatrix(FieldSpec f, int rows, int cols)
    : fld(f), nr(rows), nc(cols) {
  if (f.is_rational()) qq.assign((size_t)rows * cols, mpq_class(0));
  else fp.assign((size_t)rows * cols, 0);
}

ExactMatrix ExactMatrix::identity(FieldSpec f, int n) {
  ExactMatrix m(f, n, n);
  for (int i = 0; i < n; ++i) m.set_int(i, i, 1);
  return m;
}

Scalar ExactMatrix::at(int r, int c) const {
  Scalar s;
  s.fld = fld;
  if (fld.is_rational()) s.qq = qq[(size_t)r * nc + c];
  else s.fp = fp[(size_t)r * nc + c];
  return s;
}

void ExactMatrix::set(int r, int c, const Scalar& v) {
  if (fld.is_rational()) qq[(size_t)r * nc + c] = v.qq;
  else fp[(size_t)r * nc + c] = v.fp;
}

void ExactMatrix::set_int(int r, int c, long long num, long long den) {
  set(r, c, Scalar(fld, num, den));
}

void ExactMatrix::add_at(int r, int c, const Scalar& v) {
  if (fld.is_rational()) qq[(size_t)r * nc + c] += v.qq;
  else fp[(size_t)r * nc + c] = emod(fp[(size_t)r * nc + c] + v.fp, (long long)fld.ch);
}

bool ExactMatrix::entry_zero(int r, int c) const {
  return fld.is_rational() ? sgn(qq[(size_t)r * nc + c]) == 0
                           : fp[(size_t)r * nc + c] == 0;
}

ExactMatrix ExactMatrix::operator+(const ExactMatrix& o) const {
  if (nr != o.nr || nc != o.nc || !(fld == o.fld))
    throw std::runtime_error("matrix shape/field mismatch in +");
  ExactMatrix r(fld, nr, nc);
  if (fld.is_rational())
    for (size_t i = 0; i < qq.size(); ++i) r.qq[i] = qq[i] + o.qq[i];
  else {
    long long p = (long long)fld.ch;
    for (size_t i = 0; i < fp.size(); ++i) r.fp[i] = emod(fp[i] + o.fp[i], p);
  }
  return r;
}

ExactMatrix ExactMatrix::operator-(const ExactMatrix& o) const {
  return *this + (-o);
}

ExactMatrix ExactMatrix::operator-() const {
  ExactMatrix r(fld, nr, nc);
  if (fld.is_rational())
    for (size_t i = 0; i < qq.size(); ++i) r.qq[i] = -qq[i];
  else {
    long long p = (long long)fld.ch;
    for (size_t i = 0; i < fp.size(); ++i) r.fp[i] = emod(-fp[i], p);
  }
  return r;
}

ExactMatrix ExactMatrix::operator*(const ExactMatrix& o) const {
  if (nc != o.nr || !(fld == o.fld))
    throw std::runtime_error("matrix shape/field mismatch in *");
  ExactMatrix r(fld, nr, o.nc);
  if (fld.is_rational()) {
    for (int i = 0; i < nr; ++i)
      for (int k = 0; k < nc; ++k) {
        const mpq_class& a = qq[(size_t)i * nc + k];
        if (sgn(a) == 0) continue;
        for (int j = 0; j < o.nc; ++j) {
          const mpq_class& b = o.qq[(size_t)k * o.nc + j];
          if (sgn(b) != 0) r.qq[(size_t)i * o.nc + j] += a * b;
        }
      }
  } else {
    long long p = (long long)fld.ch;
    for (int i = 0; i < nr; ++i)
      for (int k = 0; k < nc; ++k) {
        long long a = fp[(size_t)i * nc + k];
        if (a == 0) continue;
        for (int j = 0; j < o.nc; ++j) {
          long long b = o.fp[(size_t)k * o.nc + j];
          if (b) r.fp[(size_t)i * o.nc + j] = emod(r.fp[(size_t)i * o.nc + j] + a * b, p);
        }
      }
  }
  return r;
}

bool ExactMatrix::operator==(const ExactMatrix& o) const {
  if (nr != o.nr || nc != o.nc || !(fld == o.fld)) return false;
  return fld.is_rational() ? qq == o.qq : fp == o.fp;
}

ExactMatrix ExactMatrix::scaled(const Scalar& s) const {
  ExactMatrix r(fld, nr, nc);
  if (fld.is_rational())
    for (size_t i = 0; i < qq.size(); ++i) r.qq[i] = qq[i] * s.q_value();
  else {
    long long p = (long long)fld.ch;
    for (size_t i = 0; i < fp.size(); ++i) r.fp[i] = emod(fp[i] * s.fp_value(), p);
  }
  return r;
}

ExactMatrix ExactMatrix::row_signed(const std::vector<int>& signs) const {
  ExactMatrix r = *this;
  for (int i = 0; i < nr; ++i) {
    if (signs[i] == 1) continue;
    if (fld.is_rational())
      for (int j = 0; j < nc; ++j) r.qq[(size_t)i * nc + j] = -r.qq[(size_t)i * nc + j];
    else {
      long long p = (long long)fld.ch;
      for (int j = 0; j < nc; ++j) r.fp[(size_t)i * nc + j] = emod(-r.fp[(size_t)i * nc + j], p);
    }
  }
  return r;
}

ExactMatrix ExactMatrix::col_signed(const std::vector<int>& signs) const {
  ExactMatrix r = *this;
  for (int j = 0; j < nc; ++j) {
    if (signs[j] == 1) continue;
    if (fld.is_rational())
      for (int i = 0; i < nr; ++i) r.qq[(size_t)i * nc + j] = -r.qq[(size_t)i * nc + j];
    else {
      long long p = (long long)fld.ch;
      for (int i = 0; i < nr; ++i) r.fp[(size_t)i * nc + j] = emod(-r.fp[(size_t)i * nc + j], p);
    }
  }
  return r;
}

ExactMatrix ExactMatrix::transpose() const {
  ExactMatrix r(fld, nc, nr);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) {
      if (fld.is_rational()) r.qq[(size_t)j * nr + i] = qq[(size_t)i * nc + j];
      else r.fp[(size_t)j * nr + i] = fp[(size_t)i * nc + j];
    }
  return r;
}

bool ExactMatrix::is_zero() const {
  if (fld.is_rational()) {
    for (const auto& v : qq) if (sgn(v) != 0) return false;
  } else {
    for (auto v : fp) if (v != 0) return false;
  }
  return true;
}

void ExactMatrix::set_block(int r0, int c0, const ExactMatrix& m) {
  for (int i = 0; i < m.nr; ++i)
    for (int j = 0; j < m.nc; ++j) {
      if (fld.is_rational()) qq[(size_t)(r0 + i) * nc + (c0 + j)] = m.qq[(size_t)i * m.nc + j];
      else fp[(size_t)(r0 + i) * nc + (c0 + j)] = m.fp[(size_t)i * m.nc + j];
    }
}

ExactMatrix ExactMatrix::block(int r0, int c0, int rows, int cols) const {
  ExactMatrix r(fld, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      if (fld.is_rational()) r.qq[(size_t)i * cols + j] = qq[(size_t)(r0 + i) * nc + (c0 + j)];
      else r.fp[(size_t)i * cols + j] = fp[(size_t)(r0 + i) * nc + (c0 + j)];
    }
  return r;
}

ExactMatrix ExactMatrix::select_rows(const std::vector<int>& idx) const {
  ExactMatrix r(fld, (int)idx.size(), nc);
  for (int i = 0; i < (int)idx.size(); ++i)
    for (int j = 0; j < nc; ++j) {
      if (fld.is_rational()) r.qq[(size_t)i * nc + j] = qq[(size_t)idx[i] * nc + j];
      else r.fp[(size_t)i * nc + j] = fp[(size_t)idx[i] * nc + j];
    }
  return r;
}

ExactMatrix ExactMatrix::select_cols(const std::vector<int>& idx) const {
  ExactMatrix r(fld, nr, (int)idx.size());
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < (int)idx.size(); ++j) {
      if (fld.is_rational()) r.qq[(size_t)i * idx.size() + j] = qq[(size_t)i * nc + idx[j]];
      else r.fp[(size_t)i * idx.size() + j] = fp[(size_t)i * nc + idx[j]];
    }
  return r;
}

std::string ExactMatrix::str() const {
  std::ostringstream os;
  os << nr << "x" << nc << " over " << fld.name() << "\n";
  for (int i = 0; i < nr; ++i) {
    os << "[";
    for (int j = 0; j < nc; ++j) os << (j ? " " : "") << at(i, j).str();
    os << "]\n";
  }
  return os.str();
}

ExactMatrix hcat(const ExactMatrix& a, const ExactMatrix& b) {
  ExactMatrix r(a.field(), a.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(0, a.cols(), b);
  return r;
}

ExactMatrix vcat(const ExactMatrix& a, const ExactMatrix& b) {
  ExactMatrix r(a.field(), a.rows() + b.rows(), a.cols());
  r.set_block(0, 0, a);
  r.set_block(a.rows(), 0, b);
  return r;
}

// ------------------------------------------------------------ elimination --

template <class Ops>
struct EchelonDriver {
  using T = typename Ops::T;
  Ops ops;
  std::vector<T>& a;
  int nr, nc;

  void swap_rows(int r1, int r2) {
    for (int c = 0; c < nc; ++c) std::swap(a[(size_t)r1 * nc + c], a[(size_t)r2 * nc + c]);
  }

  // Full reduced row echelon form; first nonzero entry in each column below
  // the current row is taken as pivot (no magnitude heuristics: arithmetic is
  // exact and determinism matters more than fill-in).
  std::vector<int> to_rref() {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < nc && row < nr; ++col) {
      int pr = -1;
      for (int r = row; r < nr; ++r)
        if (!ops.is_zero(a[(size_t)r * nc + col])) { pr = r; break; }
      if (pr < 0) continue;
      if (pr != row) swap_rows(pr, row);
      T piv_inv = ops.inv(a[(size_t)row * nc + col]);
      for (int c = col; c < nc; ++c)
        a[(size_t)row * nc + c] = ops.mul(a[(size_t)row * nc + c], piv_inv);
      for (int r = 0; r < nr; ++r) {
        if (r == row) continue;
        T f = a[(size_t)r * nc + col];
        if (ops.is_zero(f)) continue;
        for (int c = col; c < nc; ++c)
          a[(size_t)r * nc + c] =
              ops.sub(a[(size_t)r * nc + c], ops.mul(f, a[(size_t)row * nc + c]));
      }
      pivots.push_back(col);
      ++row;
    }
    return pivots;
  }
};

ExactMatrix rref(const ExactMatrix& m, std::vector<int>* pivots) {
  ExactMatrix r = m;
  std::vector<int> piv;
  if (r.fld.is_rational()) {
    EchelonDriver<QOps> d{QOps{}, r.qq, r.nr, r.nc};
    piv = d.to_rref();
  } else {
    EchelonDriver<FpOps> d{FpOps{(long long)r.fld.ch}, r.fp, r.nr, r.nc};
    piv = d.to_rref();
  }
  if (pivots) *pivots = std::move(piv);
  return r;
}

int rank(const ExactMatrix& m) {
  std::vector<int> piv;
  rref(m, &piv);
  return (int)piv.size();
}

ExactMatrix kernel_basis(const ExactMatrix& m) {
  std::vector<int> piv;
  ExactMatrix r = rref(m, &piv);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int c : piv) is_pivot[c] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  ExactMatrix k(m.field(), m.cols(), (int)free_cols.size());
  for (int j = 0; j < (int)free_cols.size(); ++j) {
    int fc = free_cols[j];
    k.set_int(fc, j, 1);
    for (int i = 0; i < (int)piv.size(); ++i)
      k.set(piv[i], j, -r.at(i, fc));
  }
  return k;
}

std::optional<ExactMatrix> solve(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows() != b.rows() || !(a.field() == b.field()))
    throw std::runtime_error("shape/field mismatch in solve");
  ExactMatrix aug = hcat(a, b);
  std::vector<int> piv;
  ExactMatrix r = rref(aug, &piv);
  for (int c : piv)
    if (c >= a.cols()) return std::nullopt;  // a row 0 = nonzero rhs exists
  ExactMatrix x(a.field(), a.cols(), b.cols());
  for (int i = 0; i < (int)piv.size(); ++i)
    for (int j = 0; j < b.cols(); ++j)
      x.set(piv[i], j, r.at(i, a.cols() + j));
  return x;
}

ExactMatrix kron(const ExactMatrix& a, const ExactMatrix& b) {
  ExactMatrix r(a.field(), a.rows() * b.rows(), a.cols() * b.cols());
  for (int i1 = 0; i1 < a.rows(); ++i1)
    for (int j1 = 0; j1 < a.cols(); ++j1) {
      if (a.entry_zero(i1, j1)) continue;
      Scalar s = a.at(i1, j1);
      for (int i2 = 0; i2 < b.rows(); ++i2)
        for (int j2 = 0; j2 < b.cols(); ++j2) {
          if (b.entry_zero(i2, j2)) continue;
          r.set(i1 * b.rows() + i2, j1 * b.cols() + j2, s * b.at(i2, j2));
        }
    }
  return r;
}

ExactMatrix companion_matrix(FieldSpec f, const std::vector<Scalar>& c) {
  int n = (int)c.size();
  if (n < 1) throw std::runtime_error("companion matrix needs degree >= 1");
  ExactMatrix m(f, n, n);
  for (int i = 0; i + 1 < n; ++i) m.set_int(i + 1, i, 1);
  for (int i = 0; i < n; ++i) m.set(i, n - 1, -c[i]);
  return m;
}

bool in_column_span(const ExactMatrix& m, const ExactMatrix& v) {
  return rank(m) == rank(hcat(m, v));
}

}  // namespace pnv
