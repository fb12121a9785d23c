#include <cmath>
#include <string>

#include "gsparse/certify.hpp"
#include "gsparse/error.hpp"

namespace gsparse {

namespace {

void require_t(double t) {
  if (!(t >= 4.0 / 3.0 - 1e-12) || !std::isfinite(t)) {
    throw Error(ErrorKind::kInvalidArgument, "t must be at least 4/3, got " + std::to_string(t));
  }
}

double group_correction(double mu, double t, int m_max, int m_min) {
  return mu * mu * m_max * m_max / (2.0 * (t - 1.0) * m_min);
}

}  // namespace

double mu_of_t(double t) {
  require_t(t);
  return std::sqrt((t - 1.0) * t) - (t - 1.0);
}

double delta_threshold(double t, int m_max, int m_min) {
  const double mu = mu_of_t(t);
  if (m_min < 1 || m_max < m_min) throw Error(ErrorKind::kInvalidArgument, "need 1 <= m_min <= m_max");
  return mu * (1.0 - mu) / (group_correction(mu, t, m_max, m_min) + 0.5 - mu + mu * mu);
}

double delta_threshold(double t, const GroupStructure& groups) {
  return delta_threshold(t, groups.m_max(), groups.m_min());
}

int integral_order(double t, int k) {
  if (k < 1) throw Error(ErrorKind::kInvalidArgument, "k must be positive");
  const double tk = t * k;
  const double rounded = std::round(tk);
  if (!std::isfinite(tk) || std::abs(tk - rounded) > 1e-9) {
    throw Error(ErrorKind::kNonIntegerOrder,
                "t * k = " + std::to_string(tk) + " is not an integer; the GRIP order tk must be integral");
  }
  return static_cast<int>(rounded);
}

GrnspCertificate grnsp_constants(double t, int k, double delta, const GroupStructure& groups) {
  require_t(t);
  integral_order(t, k);
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "delta must lie in [0, 1), got " + std::to_string(delta));
  }

  GrnspCertificate cert;
  cert.t = t;
  cert.k = k;
  cert.delta = delta;
  cert.mu = mu_of_t(t);
  const double mu = cert.mu;
  cert.threshold = delta_threshold(t, groups);
  cert.a_squared = mu * (1.0 - mu) - delta * (0.5 - mu + mu * mu);
  cert.b = mu * (1.0 - mu) * std::sqrt(1.0 + delta);
  const double c_squared = delta * group_correction(mu, t, groups.m_max(), groups.m_min());
  cert.c = std::sqrt(c_squared);

  if (cert.a_squared > 0.0) {
    cert.a = std::sqrt(cert.a_squared);
    cert.rho = *cert.c / *cert.a;
    cert.tau = *cert.b * std::sqrt(static_cast<double>(k)) / cert.a_squared;
  }

  if (!(cert.a_squared > 0.0)) {
    cert.reason = "a-degenerate";
  } else if (!(delta < cert.threshold) || !(c_squared < cert.a_squared)) {
    cert.reason = "delta-above-threshold";
  } else {
    cert.valid = true;
  }
  return cert;
}

GrnspCertificate certificate_for_delta(double t, int k, double delta, const GroupStructure& groups) {
  if (delta >= 1.0) {
    require_t(t);
    integral_order(t, k);
    GrnspCertificate cert;
    cert.t = t;
    cert.k = k;
    cert.delta = delta;
    cert.mu = mu_of_t(t);
    cert.threshold = delta_threshold(t, groups);
    cert.a_squared = cert.mu * (1.0 - cert.mu) - delta * (0.5 - cert.mu + cert.mu * cert.mu);
    cert.reason = "recovery_impossible";
    return cert;
  }
  return grnsp_constants(t, k, delta, groups);
}

ErrorBudget error_bounds(double rho, double tau, int k, double sigma, double eps, double p) {
  if (!(p >= 1.0 && p <= 2.0)) {
    throw Error(ErrorKind::kInvalidArgument, "p must lie in [1, 2], got " + std::to_string(p));
  }
  if (!(rho >= 0.0 && rho < 1.0) || !(tau >= 0.0) || k < 1) {
    throw Error(ErrorKind::kInvalidCertificate, "need 0 <= rho < 1, tau >= 0, k >= 1");
  }
  if (!(sigma >= 0.0) || !(eps >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "sigma and eps must be nonnegative");
  }
  ErrorBudget budget;
  budget.sigma = sigma;
  budget.eps = eps;
  budget.k = k;
  budget.p = p;
  const double gain = 2.0 / (1.0 - rho);
  const double kf = std::pow(static_cast<double>(k), 1.0 - 1.0 / p);
  budget.bound_l1 = gain * ((1.0 + rho) * sigma + 2.0 * tau * eps);
  budget.bound_lp = gain * ((rho / kf + 1.0 + rho) * sigma + (1.0 / kf + 2.0) * tau * eps);
  return budget;
}

ErrorBudget error_bounds(const GrnspCertificate& cert, double sigma, double eps, double p) {
  if (!cert.valid || !cert.rho || !cert.tau) {
    throw Error(ErrorKind::kInvalidCertificate,
                "error bounds need a valid certificate (" + (cert.reason.empty() ? "invalid" : cert.reason) + ")");
  }
  return error_bounds(*cert.rho, *cert.tau, cert.k, sigma, eps, p);
}

}  // namespace gsparse
