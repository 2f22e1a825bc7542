#include "acv/estimation.hpp"

#include <cmath>
#include <stdexcept>

namespace acv {

LsEstimate static_ls(const std::vector<double>& readings,
                     const std::vector<double>& variances) {
    return static_ls(readings, variances, std::vector<bool>(readings.size(), true));
}

LsEstimate static_ls(const std::vector<double>& readings, const std::vector<double>& variances,
                     const std::vector<bool>& mask) {
    if (readings.size() != variances.size() || readings.size() != mask.size())
        throw std::invalid_argument("static_ls: length mismatch");
    double precision = 0.0;
    for (size_t i = 0; i < readings.size(); ++i)
        if (mask[i]) precision += 1.0 / variances[i];
    if (precision == 0.0) throw std::invalid_argument("static_ls: empty mask, no estimate");
    LsEstimate est;
    est.weights.assign(readings.size(), 0.0);
    for (size_t i = 0; i < readings.size(); ++i) {
        if (!mask[i]) continue;
        est.weights[i] = (1.0 / variances[i]) / precision;
        est.value += est.weights[i] * readings[i];
    }
    est.variance = 1.0 / precision;
    return est;
}

Mat EstimatorParams::process_noise() const {
    const double qv = accel_noise_std * T * accel_noise_std * T;
    return Mat{{qv, 0.0}, {0.0, T * T * vl_variance}};
}

Mat plant_A(double T) { return Mat{{1.0, 0.0}, {-T, 1.0}}; }
Mat plant_B(double T) { return Mat{{T}, {0.0}}; }
Mat plant_F(double T) { return Mat{{0.0}, {T}}; }

Mat output_H(const SensorBank& bank) {
    Mat H(bank.n_fd(), 2, 0.0);
    for (int i = 0; i < bank.n_f(); ++i) H(i, 0) = 1.0;
    for (int i = 0; i < bank.n_d(); ++i) H(bank.n_f() + i, 1) = 1.0;
    return H;
}

std::vector<double> measurement_variances(const SensorBank& bank) {
    std::vector<double> r = bank.f_var;
    r.insert(r.end(), bank.d_var.begin(), bank.d_var.end());
    return r;
}

EstimatorState init_estimator(const ReadingFrame& frame, const SensorBank& bank) {
    const LsEstimate vf = static_ls(frame.z_f, bank.f_var);
    const LsEstimate d = static_ls(frame.z_d, bank.d_var);
    EstimatorState est;
    est.x_hat = Mat{{vf.value}, {d.value}};
    est.P = Mat{{vf.variance, 0.0}, {0.0, d.variance}};
    est.x_pred = est.x_hat;
    est.K = Mat(2, bank.n_fd(), 0.0);
    est.z_pred.assign(static_cast<size_t>(bank.n_fd()), 0.0);
    for (int i = 0; i < bank.n_f(); ++i) est.z_pred[static_cast<size_t>(i)] = vf.value;
    for (int i = 0; i < bank.n_d(); ++i)
        est.z_pred[static_cast<size_t>(bank.n_f() + i)] = d.value;
    return est;
}

EstimatorState kalman_step(const EstimatorState& est, double u_prev, double vl_hat_prev,
                           const ReadingFrame& frame, const std::vector<bool>& mask,
                           const SensorBank& bank, const EstimatorParams& params,
                           MaskPolicy policy) {
    const int nf = bank.n_f();
    const int nd = bank.n_d();
    const int nfd = nf + nd;
    if (static_cast<int>(mask.size()) != nfd)
        throw std::invalid_argument("kalman_step: mask length mismatch");

    const Mat A = plant_A(params.T);
    const Mat B = plant_B(params.T);
    const Mat F = plant_F(params.T);

    EstimatorState next;
    next.x_pred = A * est.x_hat + u_prev * B + vl_hat_prev * F;
    const Mat P_pred_raw = A * est.P * A.transpose() + params.process_noise();
    Mat P_pred = 0.5 * (P_pred_raw + P_pred_raw.transpose());

    next.z_pred.assign(static_cast<size_t>(nfd), 0.0);
    for (int i = 0; i < nf; ++i) next.z_pred[static_cast<size_t>(i)] = next.x_pred(0, 0);
    for (int i = 0; i < nd; ++i) next.z_pred[static_cast<size_t>(nf + i)] = next.x_pred(1, 0);

    std::vector<int> active;
    int active_f = 0, active_d = 0;
    for (int i = 0; i < nfd; ++i) {
        if (!mask[static_cast<size_t>(i)]) continue;
        active.push_back(i);
        (i < nf ? active_f : active_d)++;
    }
    if (active_f == 0 || active_d == 0) {
        if (policy == MaskPolicy::Throw)
            throw DegradedUpdateError(
                active_f == 0 ? "kalman_step: every F sensor masked out"
                              : "kalman_step: every D sensor masked out");
        next.x_hat = next.x_pred;
        next.P = P_pred;
        next.K = Mat(2, nfd, 0.0);
        return next;
    }

    const std::vector<double> r_all = measurement_variances(bank);
    const int m = static_cast<int>(active.size());
    Mat Hm(m, 2, 0.0);
    Mat Rm(m, m, 0.0);
    Mat innov(m, 1, 0.0);
    for (int k = 0; k < m; ++k) {
        const int row = active[static_cast<size_t>(k)];
        Hm(k, row < nf ? 0 : 1) = 1.0;
        Rm(k, k) = r_all[static_cast<size_t>(row)];
        const double z = row < nf ? frame.z_f[static_cast<size_t>(row)]
                                  : frame.z_d[static_cast<size_t>(row - nf)];
        innov(k, 0) = z - next.z_pred[static_cast<size_t>(row)];
    }

    const Mat S = Hm * P_pred * Hm.transpose() + Rm;
    const Mat Km = P_pred * Hm.transpose() * S.inverse();
    next.x_hat = next.x_pred + Km * innov;

    // Joseph-stabilized covariance update
    const Mat IKH = Mat::identity(2) - Km * Hm;
    const Mat P_raw = IKH * P_pred * IKH.transpose() + Km * Rm * Km.transpose();
    next.P = 0.5 * (P_raw + P_raw.transpose());

    next.K = Mat(2, nfd, 0.0);
    for (int k = 0; k < m; ++k) {
        next.K(0, active[static_cast<size_t>(k)]) = Km(0, k);
        next.K(1, active[static_cast<size_t>(k)]) = Km(1, k);
    }
    return next;
}

SteadyStateGain steady_state_gain(const SensorBank& bank, const EstimatorParams& params,
                                  int max_iter) {
    bank.validate();
    const Mat A = plant_A(params.T);
    const Mat H = output_H(bank);
    const Mat R = Mat::diag(measurement_variances(bank));
    const Mat Qp = params.process_noise();
    const Mat I2 = Mat::identity(2);

    auto riccati = [&](const Mat& P) {
        const Mat P_pred = A * P * A.transpose() + Qp;
        const Mat S = H * P_pred * H.transpose() + R;
        const Mat K = P_pred * H.transpose() * S.inverse();
        const Mat IKH = I2 - K * H;
        const Mat Pn = IKH * P_pred * IKH.transpose() + K * R * K.transpose();
        return 0.5 * (Pn + Pn.transpose());
    };

    const double var_f = static_ls(std::vector<double>(bank.f_var.size(), 0.0), bank.f_var).variance;
    const double var_d = static_ls(std::vector<double>(bank.d_var.size(), 0.0), bank.d_var).variance;
    Mat P0{{var_f, 0.0}, {0.0, var_d}};

    SteadyStateGain out;
    Mat P = P0;
    double residual = 0.0;
    int it = 0;
    for (; it < max_iter; ++it) {
        Mat next = riccati(P);
        residual = (next - P).frobenius_norm();
        P = std::move(next);
        if (residual <= 1e-12) break;
    }
    if (it == max_iter)
        throw NonConvergenceError("steady_state_gain: covariance recursion did not settle",
                                  residual, max_iter);
    out.P = P;
    out.iterations = it + 1;

    const Mat P_pred = A * out.P * A.transpose() + Qp;
    const Mat S = H * P_pred * H.transpose() + R;
    out.K = P_pred * H.transpose() * S.inverse();
    return out;
}

}  // namespace acv
