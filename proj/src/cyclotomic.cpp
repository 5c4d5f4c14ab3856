#include "maxblocks/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace maxblocks {

namespace {

// ---- small polynomial helpers over Q (dense, constant term first) ----

void poly_trim(std::vector<Rational>& p) {
    while (!p.empty() && p.back() == 0)
        p.pop_back();
}

std::vector<Rational> poly_mul(const std::vector<Rational>& a,
                               const std::vector<Rational>& b) {
    if (a.empty() || b.empty())
        return {};
    std::vector<Rational> r(a.size() + b.size() - 1, Rational(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * b[j];
    return r;
}

// Quotient and remainder of num by den (den trimmed, nonzero lead).
void poly_divmod(std::vector<Rational> num, const std::vector<Rational>& den,
                 std::vector<Rational>& quot, std::vector<Rational>& rem) {
    poly_trim(num);
    quot.assign(num.size() >= den.size() ? num.size() - den.size() + 1 : 0,
                Rational(0));
    Rational lead = den.back();
    while (num.size() >= den.size()) {
        Rational f = num.back() / lead;
        size_t shift = num.size() - den.size();
        quot[shift] = f;
        for (size_t i = 0; i < den.size(); ++i)
            num[shift + i] -= f * den[i];
        poly_trim(num);
        if (num.empty())
            break;
    }
    rem = std::move(num);
}

} // namespace

int euler_phi(int d) {
    if (d < 1)
        throw InputError("euler_phi: order must be positive");
    int result = d, n = d;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            result -= result / p;
            while (n % p == 0)
                n /= p;
        }
    }
    if (n > 1)
        result -= result / n;
    return result;
}

std::vector<Rational> cyclotomic_polynomial(int d) {
    if (d < 1)
        throw InputError("cyclotomic_polynomial: order must be positive");
    static std::map<int, std::vector<Rational>> cache;
    static std::mutex cache_mutex;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(d);
        if (it != cache.end())
            return it->second;
    }
    // (x^d - 1) / prod_{e | d, e < d} Phi_e, exact division.
    std::vector<Rational> result;
    if (d == 1) {
        result = {Rational(-1), Rational(1)};
    } else {
        std::vector<Rational> num(d + 1, Rational(0));
        num[0] = Rational(-1);
        num[d] = Rational(1);
        std::vector<Rational> den{Rational(1)};
        for (int e = 1; e < d; ++e)
            if (d % e == 0)
                den = poly_mul(den, cyclotomic_polynomial(e));
        std::vector<Rational> rem;
        poly_divmod(std::move(num), den, result, rem);
        if (!rem.empty())
            throw ConsistencyError("cyclotomic_polynomial: division not exact");
    }
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(d, result);
    return result;
}

// ---- CycNum ----

CycNum::CycNum() : order_(1), c_(1, Rational(0)) {}

void CycNum::reduce_(std::vector<Rational> raw) {
    const std::vector<Rational> phi = cyclotomic_polynomial(order_);
    const size_t deg = phi.size() - 1; // = euler_phi(order_)
    // Reduce modulo the monic polynomial phi.
    for (size_t i = raw.size(); i-- > deg;) {
        Rational f = raw[i];
        if (f == 0)
            continue;
        for (size_t k = 0; k < phi.size(); ++k)
            raw[i - deg + k] -= f * phi[k];
    }
    raw.resize(deg, Rational(0));
    for (auto& x : raw)
        x.canonicalize();
    c_ = std::move(raw);
}

CycNum CycNum::zero(int order) {
    CycNum z;
    z.order_ = order;
    z.c_.assign(euler_phi(order), Rational(0));
    return z;
}

CycNum CycNum::one(int order) { return from_rational(order, Rational(1)); }

CycNum CycNum::from_rational(int order, const Rational& value) {
    CycNum z = zero(order);
    z.c_[0] = value;
    return z;
}

CycNum CycNum::zeta_pow(int order, long k) {
    k %= order;
    if (k < 0)
        k += order;
    CycNum z = zero(order);
    std::vector<Rational> raw(static_cast<size_t>(k) + 1, Rational(0));
    raw.back() = Rational(1);
    z.reduce_(std::move(raw));
    return z;
}

CycNum CycNum::from_coeffs(int order, std::vector<Rational> coeffs) {
    CycNum z = zero(order);
    z.reduce_(std::move(coeffs));
    return z;
}

bool CycNum::is_zero() const {
    for (const auto& x : c_)
        if (x != 0)
            return false;
    return true;
}

bool CycNum::is_rational() const {
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0)
            return false;
    return true;
}

Rational CycNum::rational_value() const {
    if (!is_rational())
        throw InputError("CycNum: value is not rational");
    return c_[0];
}

namespace {

void check_same_order(const CycNum& x, const CycNum& y) {
    if (x.order() != y.order()) {
        std::ostringstream os;
        os << "CycNum: order mismatch (" << x.order() << " vs " << y.order() << ")";
        throw InputError(os.str());
    }
}

} // namespace

CycNum CycNum::operator-() const {
    CycNum r = *this;
    for (auto& x : r.c_)
        x = -x;
    return r;
}

CycNum operator+(const CycNum& x, const CycNum& y) {
    check_same_order(x, y);
    CycNum r = x;
    for (size_t i = 0; i < r.c_.size(); ++i) {
        r.c_[i] += y.c_[i];
        r.c_[i].canonicalize();
    }
    return r;
}

CycNum operator-(const CycNum& x, const CycNum& y) { return x + (-y); }

CycNum operator*(const CycNum& x, const CycNum& y) {
    check_same_order(x, y);
    CycNum r = CycNum::zero(x.order());
    r.reduce_(poly_mul(x.c_, y.c_));
    return r;
}

CycNum CycNum::inverse() const {
    if (is_zero())
        throw InputError("CycNum: inverse of zero");
    // Extended Euclid on (Phi_d, this) over Q[x]; Phi_d is irreducible, so
    // the gcd is a nonzero constant.
    std::vector<Rational> r0 = cyclotomic_polynomial(order_);
    std::vector<Rational> r1 = c_;
    poly_trim(r1);
    std::vector<Rational> t0; // zero polynomial
    std::vector<Rational> t1{Rational(1)};
    while (r1.size() > 1) {
        std::vector<Rational> q, rem;
        poly_divmod(r0, r1, q, rem);
        // t2 = t0 - q * t1
        std::vector<Rational> qt = poly_mul(q, t1);
        std::vector<Rational> t2 = t0;
        if (t2.size() < qt.size())
            t2.resize(qt.size(), Rational(0));
        for (size_t i = 0; i < qt.size(); ++i)
            t2[i] -= qt[i];
        poly_trim(t2);
        r0 = std::move(r1);
        r1 = std::move(rem);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r1.empty())
        throw ConsistencyError("CycNum: zero gcd against an irreducible modulus");
    Rational unit = r1[0];
    for (auto& x : t1)
        x /= unit;
    return from_coeffs(order_, std::move(t1));
}

CycNum operator/(const CycNum& x, const CycNum& y) {
    check_same_order(x, y);
    if (y.is_zero())
        throw InputError("CycNum: division by zero");
    return x * y.inverse();
}

bool operator==(const CycNum& x, const CycNum& y) {
    check_same_order(x, y);
    return x.c_ == y.c_;
}

bool operator!=(const CycNum& x, const CycNum& y) { return !(x == y); }

CycNum CycNum::galois(long a) const {
    long g = std::gcd(a % order_ == 0 ? order_ : ((a % order_) + order_) % order_,
                      static_cast<long>(order_));
    if (order_ > 1 && g != 1)
        throw InputError("CycNum: Galois exponent not coprime to the order");
    std::vector<Rational> raw(static_cast<size_t>(order_), Rational(0));
    // zeta^k -> zeta^{a k}; accumulate in exponent space then reduce.
    CycNum result = CycNum::zero(order_);
    for (size_t k = 0; k < c_.size(); ++k) {
        if (c_[k] == 0)
            continue;
        CycNum term = CycNum::zeta_pow(order_, a * static_cast<long>(k));
        result = result + CycNum::from_rational(order_, c_[k]) * term;
    }
    return result;
}

CycNum cyc_arith(const CycNum& a, const CycNum& b, CycOp op) {
    switch (op) {
    case CycOp::add:
        return a + b;
    case CycOp::sub:
        return a - b;
    case CycOp::mul:
        return a * b;
    case CycOp::div:
        return a / b;
    }
    throw InputError("cyc_arith: unknown operation");
}

// ---- ExactMatrix ----

ExactMatrix::ExactMatrix(int order, int rows, int cols)
    : order_(order), rows_(rows), cols_(cols),
      e_(static_cast<size_t>(rows) * cols, CycNum::zero(order)) {
    if (rows < 0 || cols < 0)
        throw InputError("ExactMatrix: negative dimension");
}

ExactMatrix ExactMatrix::identity(int order, int n) {
    ExactMatrix m(order, n, n);
    for (int i = 0; i < n; ++i)
        m.at(i, i) = CycNum::one(order);
    return m;
}

void ExactMatrix::check_index_(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
        throw InputError("ExactMatrix: index out of range");
}

CycNum& ExactMatrix::at(int r, int c) {
    check_index_(r, c);
    return e_[static_cast<size_t>(r) * cols_ + c];
}

const CycNum& ExactMatrix::at(int r, int c) const {
    check_index_(r, c);
    return e_[static_cast<size_t>(r) * cols_ + c];
}

ExactMatrix ExactMatrix::mul(const ExactMatrix& rhs) const {
    if (order_ != rhs.order_)
        throw InputError("ExactMatrix: mixed orders in product");
    if (cols_ != rhs.rows_)
        throw InputError("ExactMatrix: shape mismatch in product");
    ExactMatrix r(order_, rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            if (at(i, k).is_zero())
                continue;
            for (int j = 0; j < rhs.cols_; ++j)
                r.at(i, j) = r.at(i, j) + at(i, k) * rhs.at(k, j);
        }
    return r;
}

bool ExactMatrix::is_zero() const {
    for (const auto& x : e_)
        if (!x.is_zero())
            return false;
    return true;
}

ExactMatrix ExactMatrix::galois(long a) const {
    ExactMatrix r(order_, rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            r.at(i, j) = at(i, j).galois(a);
    return r;
}

int matrix_rank(const ExactMatrix& m0) {
    ExactMatrix m = m0;
    int rank = 0;
    std::vector<bool> used(m.rows(), false);
    for (int c = 0; c < m.cols(); ++c) {
        int pivot = -1;
        for (int r = 0; r < m.rows(); ++r) {
            if (!used[r] && !m.at(r, c).is_zero()) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0)
            continue;
        used[pivot] = true;
        ++rank;
        CycNum inv = m.at(pivot, c).inverse();
        for (int r = 0; r < m.rows(); ++r) {
            if (r == pivot || m.at(r, c).is_zero())
                continue;
            CycNum f = m.at(r, c) * inv;
            for (int cc = c; cc < m.cols(); ++cc)
                m.at(r, cc) = m.at(r, cc) - f * m.at(pivot, cc);
        }
    }
    return rank;
}

ExactMatrix kernel_basis(const ExactMatrix& m0) {
    ExactMatrix m = m0;
    const int rows = m.rows(), cols = m.cols();
    std::map<int, int> pivot; // column -> row holding its pivot
    int lead = 0;
    for (int c = 0; c < cols && lead < rows; ++c) {
        int p = -1;
        for (int r = lead; r < rows; ++r) {
            if (!m.at(r, c).is_zero()) {
                p = r;
                break;
            }
        }
        if (p < 0)
            continue;
        if (p != lead)
            for (int cc = 0; cc < cols; ++cc)
                std::swap(m.at(p, cc), m.at(lead, cc));
        CycNum inv = m.at(lead, c).inverse();
        for (int cc = 0; cc < cols; ++cc)
            m.at(lead, cc) = m.at(lead, cc) * inv;
        for (int r = 0; r < rows; ++r) {
            if (r == lead || m.at(r, c).is_zero())
                continue;
            CycNum f = m.at(r, c);
            for (int cc = 0; cc < cols; ++cc)
                m.at(r, cc) = m.at(r, cc) - f * m.at(lead, cc);
        }
        pivot[c] = lead;
        ++lead;
    }
    std::vector<int> free_cols;
    for (int c = 0; c < cols; ++c)
        if (!pivot.count(c))
            free_cols.push_back(c);
    ExactMatrix basis(m.order(), cols, static_cast<int>(free_cols.size()));
    for (size_t k = 0; k < free_cols.size(); ++k) {
        int fc = free_cols[k];
        basis.at(fc, static_cast<int>(k)) = CycNum::one(m.order());
        for (const auto& [pc, pr] : pivot)
            basis.at(pc, static_cast<int>(k)) = -m.at(pr, fc);
    }
    return basis;
}

ExactMatrix hstack(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.order() != b.order())
        throw InputError("hstack: mixed orders");
    if (a.rows() != b.rows())
        throw InputError("hstack: row count mismatch");
    ExactMatrix r(a.order(), a.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j)
            r.at(i, j) = a.at(i, j);
        for (int j = 0; j < b.cols(); ++j)
            r.at(i, a.cols() + j) = b.at(i, j);
    }
    return r;
}

ExactMatrix vstack(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.order() != b.order())
        throw InputError("vstack: mixed orders");
    if (a.cols() != b.cols())
        throw InputError("vstack: column count mismatch");
    ExactMatrix r(a.order(), a.rows() + b.rows(), a.cols());
    for (int j = 0; j < a.cols(); ++j) {
        for (int i = 0; i < a.rows(); ++i)
            r.at(i, j) = a.at(i, j);
        for (int i = 0; i < b.rows(); ++i)
            r.at(a.rows() + i, j) = b.at(i, j);
    }
    return r;
}

ExactMatrix block_diag(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.order() != b.order())
        throw InputError("block_diag: mixed orders");
    ExactMatrix r(a.order(), a.rows() + b.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            r.at(i, j) = a.at(i, j);
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j)
            r.at(a.rows() + i, a.cols() + j) = b.at(i, j);
    return r;
}

// ---- complexes ----

namespace {

void validate_complex_shapes(const std::vector<int>& dims,
                             const std::vector<ExactMatrix>& diffs) {
    for (int d : dims)
        if (d < 0)
            throw InputError("complex: negative dimension");
    size_t expected = dims.empty() ? 0 : dims.size() - 1;
    if (diffs.size() != expected)
        throw InputError("complex: expected one differential per adjacent "
                         "degree pair");
    for (size_t j = 0; j + 1 < dims.size(); ++j) {
        if (diffs[j].rows() != dims[j + 1] || diffs[j].cols() != dims[j]) {
            std::ostringstream os;
            os << "complex: differential at degree " << j << " has shape "
               << diffs[j].rows() << "x" << diffs[j].cols() << ", expected "
               << dims[j + 1] << "x" << dims[j];
            throw InputError(os.str());
        }
        if (j > 0 && diffs[j].order() != diffs[j - 1].order())
            throw InputError("complex: mixed orders among differentials");
    }
    for (size_t j = 0; j + 1 < diffs.size(); ++j) {
        if (!diffs[j + 1].mul(diffs[j]).is_zero()) {
            std::ostringstream os;
            os << "not a complex at degree " << j
               << ": d_(j+1) * d_j is nonzero";
            throw ConsistencyError(os.str());
        }
    }
}

} // namespace

std::vector<int> cohomology_dims(const std::vector<int>& dims,
                                 const std::vector<ExactMatrix>& diffs) {
    validate_complex_shapes(dims, diffs);
    std::vector<int> h(dims.size(), 0);
    std::vector<int> ranks(diffs.size(), 0);
    for (size_t j = 0; j < diffs.size(); ++j)
        ranks[j] = matrix_rank(diffs[j]);
    for (size_t j = 0; j < dims.size(); ++j) {
        int r_out = j < ranks.size() ? ranks[j] : 0;
        int r_in = j >= 1 ? ranks[j - 1] : 0;
        h[j] = dims[j] - r_out - r_in;
        if (h[j] < 0)
            throw ConsistencyError("cohomology_dims: negative dimension "
                                   "(ranks inconsistent with spaces)");
    }
    return h;
}

std::vector<int> cohomology_dims(const LinearComplex& c) {
    return cohomology_dims(c.dims, c.diffs);
}

namespace {

ExactMatrix diff_or_zero(const LinearComplex& c, int j) {
    if (j >= 0 && j < static_cast<int>(c.diffs.size()))
        return c.diffs[j];
    auto dim_at = [&](int k) {
        return (k >= 0 && k < static_cast<int>(c.dims.size())) ? c.dims[k] : 0;
    };
    return ExactMatrix(c.order, dim_at(j + 1), dim_at(j));
}

} // namespace

int kernel_dim_on_cohomology(const LinearComplex& source,
                             const LinearComplex& target,
                             const std::vector<ExactMatrix>& morphism,
                             int j) {
    validate_complex_shapes(source.dims, source.diffs);
    validate_complex_shapes(target.dims, target.diffs);
    if (j < 0 || j >= static_cast<int>(source.dims.size()))
        throw InputError("kernel_dim_on_cohomology: degree out of range");
    if (morphism.size() != source.dims.size())
        throw InputError("kernel_dim_on_cohomology: one morphism matrix per "
                         "source degree required");
    auto tdim = [&](int k) {
        return (k >= 0 && k < static_cast<int>(target.dims.size())) ? target.dims[k]
                                                                    : 0;
    };
    for (size_t k = 0; k < morphism.size(); ++k) {
        if (morphism[k].rows() != tdim(static_cast<int>(k)) ||
            morphism[k].cols() != source.dims[k])
            throw InputError("kernel_dim_on_cohomology: morphism shape mismatch "
                             "at degree " +
                             std::to_string(k));
    }
    auto f_at = [&](int k) {
        if (k >= 0 && k < static_cast<int>(morphism.size()))
            return morphism[k];
        return ExactMatrix(source.order, tdim(k),
                           (k >= 0 && k < static_cast<int>(source.dims.size()))
                               ? source.dims[k]
                               : 0);
    };
    // Commutation squares touching degrees j-1, j, j+1.
    for (int k = j - 1; k <= j; ++k) {
        if (k < 0 || k + 1 >= static_cast<int>(source.dims.size()))
            continue;
        ExactMatrix lhs = f_at(k + 1).mul(diff_or_zero(source, k));
        ExactMatrix rhs = diff_or_zero(target, k).mul(f_at(k));
        ExactMatrix diff(lhs.order(), lhs.rows(), lhs.cols());
        bool equal = true;
        for (int r = 0; r < lhs.rows() && equal; ++r)
            for (int c = 0; c < lhs.cols() && equal; ++c)
                if (lhs.at(r, c) != rhs.at(r, c))
                    equal = false;
        if (!equal)
            throw ConsistencyError(
                "kernel_dim_on_cohomology: morphism does not commute with the "
                "differentials at degree " +
                std::to_string(k));
    }
    ExactMatrix z = kernel_basis(diff_or_zero(source, j));
    ExactMatrix fz = f_at(j).mul(z);
    ExactMatrix d_b_prev = diff_or_zero(target, j - 1);
    int rank_db = matrix_rank(d_b_prev);
    int numerator = z.cols() - matrix_rank(hstack(fz, d_b_prev)) + rank_db;
    int rank_da = matrix_rank(diff_or_zero(source, j - 1));
    return numerator - rank_da;
}

} // namespace maxblocks
