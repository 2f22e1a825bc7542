#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace acv {

/// Thrown when a matrix inverse hits a pivot below the singularity tolerance.
struct SingularMatrixError : std::runtime_error {
    explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an analytic model cannot be built from the given inputs.
struct ModelError : std::runtime_error {
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown by iterative solvers that fail to reach tolerance.
struct NonConvergenceError : std::runtime_error {
    NonConvergenceError(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), last_residual(residual), iterations(iterations) {}
    double last_residual;
    int iterations;
};

/// Small dense row-major matrix. Everything in this project is at most
/// (n_f + n_d) square, so inversion is plain Gauss-Jordan with partial
/// pivoting; a pivot below 1e-12 counts as singular.
class Mat {
  public:
    Mat() = default;
    Mat(int rows, int cols, double fill = 0.0);
    Mat(std::initializer_list<std::initializer_list<double>> rows);

    static Mat identity(int n);
    static Mat zeros(int rows, int cols) { return Mat(rows, cols, 0.0); }
    static Mat diag(const std::vector<double>& entries);
    static Mat col_vec(const std::vector<double>& entries);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

    Mat transpose() const;
    Mat inverse() const;
    double frobenius_norm() const;
    double trace() const;

    Mat& operator+=(const Mat& other);
    Mat& operator-=(const Mat& other);
    Mat& operator*=(double s);

    const std::vector<double>& data() const { return data_; }

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

Mat operator+(Mat a, const Mat& b);
Mat operator-(Mat a, const Mat& b);
Mat operator*(const Mat& a, const Mat& b);
Mat operator*(double s, Mat a);
Mat operator*(Mat a, double s);

/// Eigenvalues of a symmetric matrix (cyclic Jacobi), ascending.
std::vector<double> sym_eigenvalues(const Mat& s);

/// Symmetric PSD check: all eigenvalues >= -tol.
bool is_symmetric_psd(const Mat& s, double tol = 1e-9);

/// Gaussian CDF with the given mean and variance. A zero variance degenerates
/// to the step function at the mean. Negative variance is a domain error.
double gaussian_cdf(double x, double mean = 0.0, double variance = 1.0);

/// Standard normal quantile (inverse CDF) for p in (0,1).
double normal_quantile(double p);

struct FixedPointOptions {
    double tol = 1e-10;
    int max_iter = 100000;
};

/// Iterates x <- map(x) until ||map(x) - x||_F <= tol. The caller is
/// responsible for supplying a contraction; non-convergence throws
/// NonConvergenceError carrying the last residual norm.
Mat fixed_point_solve(const std::function<Mat(const Mat&)>& map, Mat init,
                      const FixedPointOptions& opt = {});

/// Deterministic seeded random stream (xoshiro256** seeded via splitmix64).
/// Identical (seed, stream) pairs reproduce bit-identical draw sequences on
/// any platform; distinct stream ids give independent streams.
class RngStream {
  public:
    explicit RngStream(uint64_t seed, uint64_t stream = 0);

    uint64_t seed() const { return seed_; }
    uint64_t stream() const { return stream_; }

    uint64_t next_u64();
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01();
    /// Standard normal via Box-Muller (pairs cached).
    double normal();
    double gaussian(double mean, double stddev) { return mean + stddev * normal(); }

  private:
    uint64_t seed_ = 0;
    uint64_t stream_ = 0;
    uint64_t s_[4] = {};
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace acv
