#include "fpsop/certificate.hpp"

#include <cmath>
#include <limits>

namespace fpsop {

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::lower:
      return "lower";
    case BoundKind::upper:
      return "upper";
    case BoundKind::exact:
      return "exact";
  }
  return "lower";
}

void RunningValue::push(double term) {
  const std::size_t index = history_.size();
  if (std::isnan(term)) term = kInfinity;
  if (mode_ == Mode::sum) {
    const double prev = history_.empty() ? 0.0 : history_.back();
    history_.push_back(prev + term);
    return;
  }
  const double prev = history_.empty() ? -kInfinity : history_.back();
  if (term > prev) {
    // Rounding-level gains count as ties, which keep the earliest index.
    if (!(prev > 0.0) || term > prev * (1.0 + 16 * std::numeric_limits<double>::epsilon())) argmax_ = index;
    history_.push_back(term);
  } else {
    history_.push_back(prev);
  }
}

BoundCertificate RunningValue::finish(BoundKind kind, const SpaceConfig& space,
                                      const std::function<double(double)>& transform, bool report_attainment) const {
  BoundCertificate cert;
  cert.kind = kind;
  cert.truncation_degree = space.truncation_degree;
  if (history_.empty()) {
    cert.value = transform(0.0);
    cert.constant = 0.0;
    return cert;
  }

  auto raw_at = [this](std::size_t i) { return std::max(history_[i], 0.0); };
  auto value_at = [&](std::size_t i) { return transform(raw_at(i)); };

  const std::size_t last = history_.size() - 1;
  const std::size_t window = space.tail_window;
  const std::size_t back = last >= window ? last - window : 0;

  cert.constant = raw_at(last);
  cert.value = value_at(last);
  const double start = value_at(back);
  cert.tail_delta = std::isfinite(cert.value) && std::isfinite(start) ? cert.value - start : kInfinity;
  cert.converged = std::isfinite(cert.value) && std::fabs(cert.tail_delta) <= space.tolerance;

  bool divergent = !std::isfinite(cert.value);
  if (!divergent && !cert.converged) {
    if (cert.constant > space.cap) {
      divergent = true;
    } else if (last >= 2 * window) {
      const double growth_last = raw_at(last) - raw_at(last - window);
      const std::size_t mid = last / 2;
      const double growth_mid = raw_at(mid) - raw_at(mid - window);
      divergent = growth_mid > 0.0 && growth_last >= 0.5 * growth_mid;
    }
  }
  if (divergent) {
    cert.value = kInfinity;
    cert.constant = kInfinity;
    cert.converged = false;
    cert.notes.emplace_back("divergent: running value still growing at truncation");
  }

  if (report_attainment && argmax_ && !divergent && *argmax_ + window <= last) cert.attained_at = argmax_;
  return cert;
}

}  // namespace fpsop
