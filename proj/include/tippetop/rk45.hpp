#pragma once

// Embedded Dormand-Prince 5(4) step engine with the classic 4th-order dense
// output and PI step-size control. The engine advances one accepted step at a
// time; observers sample through the dense interpolant, so the step sequence
// never depends on the sampling grid.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

#include "tippetop/errors.hpp"

namespace tippetop::ode {

template <std::size_t N>
using State = std::array<double, N>;

/// Derivative callback: f(t, y, dydt). May throw tippetop::Error; the engine
/// retries a failing trial step with half the step size until the step size
/// underflows, at which point the original error propagates.
template <std::size_t N, class Deriv>
class DormandPrince {
public:
    DormandPrince(Deriv f, double rtol, double atol)
        : f_(std::move(f)), rtol_(rtol), atol_(atol) {
        if (!(rtol > 0.0 && atol > 0.0))
            throw OutOfDomain("DormandPrince: rtol and atol must be positive");
    }

    void init(double t0, const State<N>& y0, double t_end) {
        t_ = t0;
        y_ = y0;
        t_end_ = t_end;
        f_(t_, y_, k_[0]);
        h_ = initial_step();
        facold_ = 1e-4;
        accepted_ = rejected_ = 0;
        max_error_ = 0.0;
    }

    double t() const { return t_; }
    double t_old() const { return t_old_; }
    double h_last() const { return h_last_; }
    const State<N>& y() const { return y_; }
    bool finished() const { return t_ >= t_end_; }

    std::size_t accepted_steps() const { return accepted_; }
    std::size_t rejected_steps() const { return rejected_; }
    double max_error_estimate() const { return max_error_; }

    /// Advances to the next accepted step. Call only while !finished().
    void step() {
        for (;;) {
            if (h_ < 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t_), 1.0))
                throw StepSizeUnderflow{};
            const bool clipped = t_ + h_ >= t_end_;
            const double h = clipped ? t_end_ - t_ : h_;

            State<N> y_new;
            double err;
            try {
                err = try_step(h, y_new);
            } catch (const StepSizeUnderflow&) {
                throw;
            } catch (const Error&) {
                // A stage landed outside the model's domain; shrink and retry.
                h_ = 0.5 * h;
                if (h_ < 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t_), 1.0))
                    throw;
                continue;
            }

            max_error_ = std::max(max_error_, err);
            const double fac11 = std::pow(err, expo1_);
            if (err <= 1.0) {
                // accepted
                double fac = fac11 / std::pow(facold_, beta_);
                fac = std::max(inv_facr_, std::min(inv_facl_, fac / safe_));
                double h_new = h / fac;
                facold_ = std::max(err, 1e-4);
                prepare_dense(h, y_new);
                t_old_ = t_;
                h_last_ = h;
                t_ = clipped ? t_end_ : t_ + h;
                y_ = y_new;
                k_[0] = k_[6];  // FSAL
                if (reject_) h_new = std::min(h_new, h);
                reject_ = false;
                h_ = h_new;
                ++accepted_;
                return;
            }
            // rejected
            reject_ = true;
            ++rejected_;
            h_ = h / std::min(inv_facl_, fac11 / safe_);
        }
    }

    /// Dense evaluation at ts within the last accepted step [t_old, t].
    State<N> dense(double ts) const {
        const double th = (ts - t_old_) / h_last_;
        const double th1 = 1.0 - th;
        State<N> out;
        for (std::size_t i = 0; i < N; ++i)
            out[i] = r1_[i] + th * (r2_[i] + th1 * (r3_[i] + th * (r4_[i] + th1 * r5_[i])));
        return out;
    }

private:
    double try_step(double h, State<N>& y_new) {
        State<N> tmp;
        // stage 2
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y_[i] + h * a21 * k_[0][i];
        f_(t_ + c2 * h, tmp, k_[1]);
        // stage 3
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y_[i] + h * (a31 * k_[0][i] + a32 * k_[1][i]);
        f_(t_ + c3 * h, tmp, k_[2]);
        // stage 4
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y_[i] + h * (a41 * k_[0][i] + a42 * k_[1][i] + a43 * k_[2][i]);
        f_(t_ + c4 * h, tmp, k_[3]);
        // stage 5
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y_[i] + h * (a51 * k_[0][i] + a52 * k_[1][i] + a53 * k_[2][i] + a54 * k_[3][i]);
        f_(t_ + c5 * h, tmp, k_[4]);
        // stage 6
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y_[i] + h * (a61 * k_[0][i] + a62 * k_[1][i] + a63 * k_[2][i] +
                                  a64 * k_[3][i] + a65 * k_[4][i]);
        f_(t_ + h, tmp, k_[5]);
        // stage 7 = 5th order solution
        for (std::size_t i = 0; i < N; ++i)
            y_new[i] = y_[i] + h * (a71 * k_[0][i] + a73 * k_[2][i] + a74 * k_[3][i] +
                                    a75 * k_[4][i] + a76 * k_[5][i]);
        f_(t_ + h, y_new, k_[6]);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double e = h * (e1 * k_[0][i] + e3 * k_[2][i] + e4 * k_[3][i] +
                                  e5 * k_[4][i] + e6 * k_[5][i] + e7 * k_[6][i]);
            const double sc = atol_ + rtol_ * std::max(std::abs(y_[i]), std::abs(y_new[i]));
            err += (e / sc) * (e / sc);
        }
        return std::sqrt(err / static_cast<double>(N));
    }

    void prepare_dense(double h, const State<N>& y_new) {
        for (std::size_t i = 0; i < N; ++i) {
            const double dy = y_new[i] - y_[i];
            r1_[i] = y_[i];
            r2_[i] = dy;
            r3_[i] = h * k_[0][i] - dy;
            r4_[i] = dy - h * k_[6][i] - r3_[i];
            r5_[i] = h * (d1 * k_[0][i] + d3 * k_[2][i] + d4 * k_[3][i] + d5 * k_[4][i] +
                          d6 * k_[5][i] + d7 * k_[6][i]);
        }
    }

    double initial_step() {
        State<N> sc, y1, f1;
        double d0 = 0.0, d1n = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            sc[i] = atol_ + rtol_ * std::abs(y_[i]);
            d0 += (y_[i] / sc[i]) * (y_[i] / sc[i]);
            d1n += (k_[0][i] / sc[i]) * (k_[0][i] / sc[i]);
        }
        d0 = std::sqrt(d0 / N);
        d1n = std::sqrt(d1n / N);
        double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
        h0 = std::min(h0, t_end_ - t_);
        try {
            for (std::size_t i = 0; i < N; ++i) y1[i] = y_[i] + h0 * k_[0][i];
            f_(t_ + h0, y1, f1);
            double d2 = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const double df = (f1[i] - k_[0][i]) / sc[i];
                d2 += df * df;
            }
            d2 = std::sqrt(d2 / N) / h0;
            const double dm = std::max(d1n, d2);
            const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                          : std::pow(0.01 / dm, 0.2);
            return std::min({100.0 * h0, h1, t_end_ - t_});
        } catch (const Error&) {
            return std::min(1e-6, t_end_ - t_);
        }
    }

    // Dormand-Prince coefficients
    static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                            a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                            a65 = -5103.0 / 18656.0;
    static constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                            a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                            e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
    static constexpr double d1 = -12715105075.0 / 11282082432.0,
                            d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0,
                            d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0,
                            d7 = 69997945.0 / 29380423.0;
    // PI controller (Hairer's dopri5 defaults)
    static constexpr double beta_ = 0.04;
    static constexpr double expo1_ = 0.2 - beta_ * 0.75;
    static constexpr double safe_ = 0.9;
    static constexpr double inv_facl_ = 5.0;   // 1/0.2
    static constexpr double inv_facr_ = 0.1;   // 1/10

    Deriv f_;
    double rtol_, atol_;
    double t_ = 0.0, t_end_ = 0.0, h_ = 0.0;
    double t_old_ = 0.0, h_last_ = 0.0;
    State<N> y_{};
    std::array<State<N>, 7> k_{};
    State<N> r1_{}, r2_{}, r3_{}, r4_{}, r5_{};
    double facold_ = 1e-4;
    bool reject_ = false;
    std::size_t accepted_ = 0, rejected_ = 0;
    double max_error_ = 0.0;
};

} // namespace tippetop::ode
