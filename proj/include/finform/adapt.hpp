#pragma once

#include <optional>
#include <string>
#include <vector>

#include "finform/filter.hpp"
#include "finform/plant.hpp"

namespace finform {

/// Periodic C1 surjection of the unbounded internal variable onto the
/// parameter interval:  lambda(s) = lo + (hi - lo) (sin s + 1) / 2,  period 2 pi.
struct LambdaWrap {
    double theta_lo = -1.0;
    double theta_hi = 1.0;
    double period = 6.283185307179586476925286766559;  // full coverage horizon T
};

double lambda_eval(const LambdaWrap& w, double s);

/// Image covers [theta_lo, theta_hi] (sampled over one period).
ProbeReport probe_lambda_image(const LambdaWrap& w, int points = 20001);
/// For every start s and target theta there is tau in (0, T] with
/// lambda(s + tau) = theta, certified by a sign change on a tau grid.
ProbeReport probe_lambda_reachability(const LambdaWrap& w, int s_points = 32, int theta_points = 33,
                                      int tau_points = 4096);
/// Finite-difference slope continuity over one period.
ProbeReport probe_lambda_smooth(const LambdaWrap& w, int points = 4096);

struct AdaptConfig {
    double gamma = 1.0;
    double delta0 = 0.025;  // band share reserved for the filter error
    double Delta = 0.0;     // disturbance budget ||upsilon||_inf
    LambdaWrap wrap;
    FilterConfig filter;
    std::optional<double> theta0_init;        // overrides the C_theta(t0) = 0 start
    std::optional<double> theta0_reflect_at;  // |theta0| bound that flips the gamma sign

    double delta() const { return delta0 + Delta; }
    bool valid() const { return gamma > 0.0 && delta0 > 0.0 && Delta >= 0.0; }
};

/// Switching gate: 1 iff |phi(psi) + alpha| > delta.
int s_delta(double phi_psi_plus_alpha, double delta);

/// Algebraic part of the estimate: Phi(psi) + psi*alpha where Phi is the
/// primitive of phi. For phi = k psi this is psi (alpha + k psi / 2).
double theta_p(double psi_val, double alpha_val, const FeedbackPhi& phi);

/// Integral-part rate, gated:  gate * ( phi (phi + alpha) - c1 psi (xi2 + b1 psi) ).
/// Together with theta_p this makes the finite form differentiate exactly to
///   theta0' = gamma S_delta (phi + psi') (phi + alpha).
double theta_I_rhs(double psi_val, double phi_val, double alpha_val, double xi2, double b1,
                   double c1, int gate);

enum class EventKind { Enter, Leave };  // Enter = into the dormant band

const char* to_string(EventKind k);

struct SwitchEvent {
    double t = 0.0;
    EventKind kind = EventKind::Enter;
    double theta0_before = 0.0;
    double theta0_after = 0.0;
};

enum class Phase { Active, Dormant };

/// Hybrid state of the finite-form law. Pure given (psi, alpha) between
/// events; on_enter/on_leave apply the C_theta branch switches, keeping
/// theta0 continuous by construction.
class AdaptLaw {
  public:
    AdaptLaw(const AdaptConfig& cfg, const FeedbackPhi& phi) : cfg_(cfg), phi_(phi) {}

    /// Sets the initial phase from the sign test on |phi(psi)+alpha| at t0.
    void init(double t0, double psi0, double alpha0);

    double theta0(double psi_val, double alpha_val) const;
    /// theta0 with an explicit integral-part value (for integrator stages).
    double theta0_at(double psi_val, double alpha_val, double theta_I_value) const;
    double theta_hat_scalar(double psi_val, double alpha_val) const;
    double c_theta(double psi_val, double alpha_val) const;
    double theta_I() const { return theta_I_; }
    void set_theta_I(double v) { theta_I_ = v; }

    Phase phase() const { return phase_; }
    int gate() const { return phase_ == Phase::Active ? 1 : 0; }
    double gamma_signed() const { return gamma_sign_ * cfg_.gamma; }

    double theta_I_rate(double psi_val, double alpha_val, double xi2) const;

    /// Band boundary function |phi(psi) + alpha| - delta (events at its zeros).
    double band_excess(double psi_val, double alpha_val) const;

    void on_enter(double t, double psi_val, double alpha_val);
    void on_leave(double t, double psi_val, double alpha_val);
    /// Applies the event matching the current phase; throws EventOrderViolation
    /// if `kind` repeats the previous event.
    void apply_event(EventKind kind, double t, double psi_val, double alpha_val);

    const std::vector<SwitchEvent>& switch_log() const { return log_; }
    const AdaptConfig& config() const { return cfg_; }

    /// gamma sign safeguard (theta0_reflect_at); checked once per accepted step.
    void maybe_reflect(double psi_val, double alpha_val);

  private:
    AdaptConfig cfg_;
    FeedbackPhi phi_;
    Phase phase_ = Phase::Active;
    double theta_I_ = 0.0;
    double c_theta_active_ = 0.0;
    double theta0_frozen_ = 0.0;
    double gamma_sign_ = 1.0;
    std::vector<SwitchEvent> log_;
};

}  // namespace finform
