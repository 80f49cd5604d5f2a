#include "finform/adapt.hpp"

#include <cmath>
#include <sstream>

#include "finform/errors.hpp"

namespace finform {

double lambda_eval(const LambdaWrap& w, double s) {
    return w.theta_lo + (w.theta_hi - w.theta_lo) * (std::sin(s) + 1.0) / 2.0;
}

ProbeReport probe_lambda_image(const LambdaWrap& w, int points) {
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < points; ++i) {
        const double v = lambda_eval(w, w.period * i / (points - 1));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double tol = 1e-6 * (w.theta_hi - w.theta_lo) + 1e-12;
    if (lo > w.theta_lo + tol || hi < w.theta_hi - tol) {
        std::ostringstream os;
        os << "lambda image [" << lo << ", " << hi << "] does not cover ["
           << w.theta_lo << ", " << w.theta_hi << "]";
        return {false, os.str()};
    }
    return {true, ""};
}

ProbeReport probe_lambda_reachability(const LambdaWrap& w, int s_points, int theta_points,
                                      int tau_points) {
    const double span = w.theta_hi - w.theta_lo;
    for (int i = 0; i < s_points; ++i) {
        const double s = w.period * i / s_points;
        for (int j = 0; j < theta_points; ++j) {
            const double theta = w.theta_lo + span * j / (theta_points - 1);
            bool hit = false;
            double prev = lambda_eval(w, s) - theta;
            for (int m = 1; m <= tau_points && !hit; ++m) {
                const double tau = w.period * m / tau_points;
                const double cur = lambda_eval(w, s + tau) - theta;
                if (cur == 0.0 || prev * cur < 0.0 ||
                    std::abs(cur) < 1e-6 * span)  // tangency at the interval ends
                    hit = true;
                prev = cur;
            }
            if (!hit) {
                std::ostringstream os;
                os << "no tau in (0, T] reaches theta=" << theta << " from s=" << s;
                return {false, os.str()};
            }
        }
    }
    return {true, ""};
}

ProbeReport probe_lambda_smooth(const LambdaWrap& w, int points) {
    const double h = w.period / points;
    const double span = w.theta_hi - w.theta_lo;
    double prev_slope = (lambda_eval(w, h) - lambda_eval(w, 0.0)) / h;
    for (int i = 1; i < points; ++i) {
        const double s = i * h;
        const double slope = (lambda_eval(w, s + h) - lambda_eval(w, s)) / h;
        if (std::abs(slope - prev_slope) > 2.0 * span * h + 1e-9) {
            std::ostringstream os;
            os << "lambda slope jump " << std::abs(slope - prev_slope) << " at s=" << s;
            return {false, os.str()};
        }
        prev_slope = slope;
    }
    return {true, ""};
}

int s_delta(double phi_psi_plus_alpha, double delta) {
    return std::abs(phi_psi_plus_alpha) > delta ? 1 : 0;
}

double theta_p(double psi_val, double alpha_val, const FeedbackPhi& phi) {
    return phi.antideriv(psi_val) + psi_val * alpha_val;
}

double theta_I_rhs(double psi_val, double phi_val, double alpha_val, double xi2, double b1,
                   double c1, int gate) {
    if (gate == 0) return 0.0;
    return phi_val * (phi_val + alpha_val) - c1 * psi_val * (xi2 + b1 * psi_val);
}

const char* to_string(EventKind k) { return k == EventKind::Enter ? "ENTER" : "LEAVE"; }

void AdaptLaw::init(double t0, double psi0, double alpha0) {
    (void)t0;
    theta_I_ = 0.0;
    c_theta_active_ = 0.0;
    const double tp = theta_p(psi0, alpha0, phi_);
    if (cfg_.theta0_init) {
        // c_theta chosen so that theta0(t0) equals the requested value
        c_theta_active_ = *cfg_.theta0_init / cfg_.gamma - tp - theta_I_;
    }
    const double excess = band_excess(psi0, alpha0);
    if (excess <= 0.0) {
        phase_ = Phase::Dormant;
        theta0_frozen_ = cfg_.gamma * (tp + theta_I_ + c_theta_active_);
    } else {
        phase_ = Phase::Active;
    }
}

double AdaptLaw::theta0(double psi_val, double alpha_val) const {
    return theta0_at(psi_val, alpha_val, theta_I_);
}

double AdaptLaw::theta0_at(double psi_val, double alpha_val, double theta_I_value) const {
    if (phase_ == Phase::Dormant) return theta0_frozen_;
    return gamma_signed() * (theta_p(psi_val, alpha_val, phi_) + theta_I_value + c_theta_active_);
}

double AdaptLaw::theta_hat_scalar(double psi_val, double alpha_val) const {
    return lambda_eval(cfg_.wrap, theta0(psi_val, alpha_val));
}

double AdaptLaw::c_theta(double psi_val, double alpha_val) const {
    if (phase_ == Phase::Active) return c_theta_active_;
    return theta0_frozen_ / gamma_signed() - theta_I_ - theta_p(psi_val, alpha_val, phi_);
}

double AdaptLaw::theta_I_rate(double psi_val, double alpha_val, double xi2) const {
    return theta_I_rhs(psi_val, phi_.phi(psi_val), alpha_val, xi2, cfg_.filter.b1, cfg_.filter.c1,
                       gate());
}

double AdaptLaw::band_excess(double psi_val, double alpha_val) const {
    return std::abs(phi_.phi(psi_val) + alpha_val) - cfg_.delta();
}

void AdaptLaw::on_enter(double t, double psi_val, double alpha_val) {
    if (phase_ == Phase::Dormant)
        throw EventOrderViolation("ENTER while already dormant at t=" + std::to_string(t));
    const double before = theta0(psi_val, alpha_val);
    theta0_frozen_ = before;
    phase_ = Phase::Dormant;
    log_.push_back({t, EventKind::Enter, before, theta0(psi_val, alpha_val)});
}

void AdaptLaw::on_leave(double t, double psi_val, double alpha_val) {
    if (phase_ == Phase::Active)
        throw EventOrderViolation("LEAVE while already active at t=" + std::to_string(t));
    const double before = theta0_frozen_;
    c_theta_active_ =
        theta0_frozen_ / gamma_signed() - theta_I_ - theta_p(psi_val, alpha_val, phi_);
    phase_ = Phase::Active;
    log_.push_back({t, EventKind::Leave, before, theta0(psi_val, alpha_val)});
}

void AdaptLaw::apply_event(EventKind kind, double t, double psi_val, double alpha_val) {
    if (kind == EventKind::Enter)
        on_enter(t, psi_val, alpha_val);
    else
        on_leave(t, psi_val, alpha_val);
}

void AdaptLaw::maybe_reflect(double psi_val, double alpha_val) {
    if (!cfg_.theta0_reflect_at) return;
    const double th0 = theta0(psi_val, alpha_val);
    const bool outward = (th0 >= *cfg_.theta0_reflect_at && gamma_sign_ > 0.0) ||
                         (th0 <= -*cfg_.theta0_reflect_at && gamma_sign_ < 0.0);
    if (!outward) return;
    gamma_sign_ = -gamma_sign_;
    // rebase the offset so theta0 is continuous across the sign flip
    if (phase_ == Phase::Active)
        c_theta_active_ = th0 / gamma_signed() - theta_I_ - theta_p(psi_val, alpha_val, phi_);
}

}  // namespace finform
