#include "acv/mathkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace acv {

namespace {
constexpr double kPivotTol = 1e-12;
}

Mat::Mat(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("Mat: dimensions must be >= 1");
}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ ? static_cast<int>(rows.begin()->size()) : 0;
    if (rows_ < 1 || cols_ < 1) throw std::invalid_argument("Mat: dimensions must be >= 1");
    data_.reserve(static_cast<size_t>(rows_) * cols_);
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != cols_)
            throw std::invalid_argument("Mat: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Mat Mat::identity(int n) {
    Mat m(n, n, 0.0);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::diag(const std::vector<double>& entries) {
    Mat m(static_cast<int>(entries.size()), static_cast<int>(entries.size()), 0.0);
    for (int i = 0; i < m.rows(); ++i) m(i, i) = entries[static_cast<size_t>(i)];
    return m;
}

Mat Mat::col_vec(const std::vector<double>& entries) {
    Mat m(static_cast<int>(entries.size()), 1, 0.0);
    for (int i = 0; i < m.rows(); ++i) m(i, 0) = entries[static_cast<size_t>(i)];
    return m;
}

Mat Mat::transpose() const {
    Mat t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

Mat Mat::inverse() const {
    if (rows_ != cols_) throw std::invalid_argument("Mat::inverse: matrix not square");
    const int n = rows_;
    Mat a(*this);
    Mat inv = Mat::identity(n);
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::abs(a(col, col));
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(a(r, col)) > best) {
                best = std::abs(a(r, col));
                pivot = r;
            }
        }
        if (best < kPivotTol)
            throw SingularMatrixError("Mat::inverse: pivot " + std::to_string(best) +
                                      " below tolerance at column " + std::to_string(col));
        if (pivot != col) {
            for (int c = 0; c < n; ++c) {
                std::swap(a(pivot, c), a(col, c));
                std::swap(inv(pivot, c), inv(col, c));
            }
        }
        const double d = a(col, col);
        for (int c = 0; c < n; ++c) {
            a(col, c) /= d;
            inv(col, c) /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a(r, col);
            if (f == 0.0) continue;
            for (int c = 0; c < n; ++c) {
                a(r, c) -= f * a(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }
    return inv;
}

double Mat::frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

double Mat::trace() const {
    double s = 0.0;
    for (int i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
    return s;
}

Mat& Mat::operator+=(const Mat& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("Mat: shape mismatch in +=");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Mat& Mat::operator-=(const Mat& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("Mat: shape mismatch in -=");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

Mat& Mat::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

Mat operator+(Mat a, const Mat& b) { return a += b; }
Mat operator-(Mat a, const Mat& b) { return a -= b; }

Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("Mat: shape mismatch in *");
    Mat out(a.rows(), b.cols(), 0.0);
    for (int r = 0; r < a.rows(); ++r) {
        for (int k = 0; k < a.cols(); ++k) {
            const double av = a(r, k);
            if (av == 0.0) continue;
            for (int c = 0; c < b.cols(); ++c) out(r, c) += av * b(k, c);
        }
    }
    return out;
}

Mat operator*(double s, Mat a) { return a *= s; }
Mat operator*(Mat a, double s) { return a *= s; }

std::vector<double> sym_eigenvalues(const Mat& s) {
    if (s.rows() != s.cols()) throw std::invalid_argument("sym_eigenvalues: matrix not square");
    const int n = s.rows();
    Mat a(s);
    // inputs are covariance-like; fold any asymmetry before rotating
    for (int r = 0; r < n; ++r)
        for (int c = r + 1; c < n; ++c) {
            const double m = 0.5 * (a(r, c) + a(c, r));
            a(r, c) = m;
            a(c, r) = m;
        }
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int r = 0; r < n; ++r)
            for (int c = r + 1; c < n; ++c) off += a(r, c) * a(r, c);
        if (off < 1e-26) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ev[static_cast<size_t>(i)] = a(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

bool is_symmetric_psd(const Mat& s, double tol) {
    if (s.rows() != s.cols()) return false;
    for (int r = 0; r < s.rows(); ++r)
        for (int c = r + 1; c < s.cols(); ++c)
            if (std::abs(s(r, c) - s(c, r)) > 1e-9 * (1.0 + std::abs(s(r, c)))) return false;
    return sym_eigenvalues(s).front() >= -tol;
}

double gaussian_cdf(double x, double mean, double variance) {
    if (variance < 0.0) throw std::invalid_argument("gaussian_cdf: negative variance");
    if (variance == 0.0) {
        if (x < mean) return 0.0;
        if (x > mean) return 1.0;
        return 0.5;
    }
    const double z = (x - mean) / std::sqrt(2.0 * variance);
    return 0.5 * std::erfc(-z);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p outside (0,1)");
    // Acklam's rational approximation, then one Halley refinement through erfc.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

Mat fixed_point_solve(const std::function<Mat(const Mat&)>& map, Mat init,
                      const FixedPointOptions& opt) {
    Mat x = std::move(init);
    double residual = 0.0;
    for (int it = 0; it < opt.max_iter; ++it) {
        Mat next = map(x);
        residual = (next - x).frobenius_norm();
        x = std::move(next);
        if (residual <= opt.tol) return x;
    }
    throw NonConvergenceError("fixed_point_solve: no convergence after " +
                                  std::to_string(opt.max_iter) +
                                  " iterations, residual " + std::to_string(residual),
                              residual, opt.max_iter);
}

namespace {

uint64_t splitmix64(uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RngStream::RngStream(uint64_t seed, uint64_t stream) : seed_(seed), stream_(stream) {
    uint64_t sm = seed ^ (0xd1342543de82ef95ULL * (stream + 1));
    for (auto& w : s_) w = splitmix64(sm);
    bool all_zero = true;
    for (auto w : s_) all_zero = all_zero && w == 0;
    if (all_zero) s_[0] = 1;
}

uint64_t RngStream::next_u64() {
    const uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RngStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
}

}  // namespace acv
