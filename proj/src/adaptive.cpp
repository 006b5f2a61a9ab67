#include "qterm/adaptive.hpp"

#include <algorithm>

#include "qterm/stepsizes.hpp"

namespace qterm {

std::optional<AdaptiveDecision> adaptive_step(const GradientHistory& hist, double tau,
                                              ShortRule rule, bool use_new) {
  if (hist.size() == 0) return std::nullopt;
  const auto& cur = hist.at_lag(0);
  if (!cur.bb1 || !cur.bb2) return std::nullopt;
  const double bb1_k = *cur.bb1;
  const double bb2_k = *cur.bb2;

  if (!(bb2_k / bb1_k < tau)) return AdaptiveDecision{bb1_k, Branch::Bb1, false};

  const HistoryRecord* prev = hist.size() >= 2 ? &hist.at_lag(1) : nullptr;
  const bool prev_ok = prev && prev->bb1 && prev->bb2;
  if (!prev_ok) return AdaptiveDecision{bb2_k, Branch::ShortBb2, true};
  const double min2 = std::min(*prev->bb2, bb2_k);

  auto try_bbq = [&]() -> AdaptiveDecision {
    const auto bbq = bbq_stepsize(*prev->bb1, bb1_k, *prev->bb2, bb2_k);
    if (bbq) return {std::min(min2, *bbq), Branch::ShortBbq, true};
    return {min2, Branch::ShortBb2Min, true};
  };

  if (rule == ShortRule::Quadratic) {
    if (use_new) {
      const auto a_new = alpha_new_bb(hist);
      if (a_new) return AdaptiveDecision{std::min(min2, *a_new), Branch::ShortNew, true};
    }
    return try_bbq();
  }

  const bool older_ok = hist.size() >= 3 && hist.at_lag(2).bb1.has_value();
  if (use_new && older_ok) {
    const auto a_new = alpha_new_bb(hist);
    if (a_new) return AdaptiveDecision{std::min(min2, *a_new), Branch::ShortNew, true};
    return AdaptiveDecision{min2, Branch::ShortBb2Min, true};
  }
  return try_bbq();
}

}  // namespace qterm
