#include "wavenet/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "wavenet/error.hpp"

namespace wavenet {

GradcheckReport gradcheck(const Model& model_in, const Dataset& batch, double step, double floor) {
  Model model = model_in;
  auto loss_at = [&](const std::string& name) {
    const double l = softmax_xent(model.forward(batch.x, Mode::train), batch.y).loss;
    if (!std::isfinite(l)) throw NumericError("gradcheck: non-finite loss while perturbing '" + name + "'");
    return l;
  };

  model.zero_grad();
  const XentResult base = softmax_xent(model.forward(batch.x, Mode::train), batch.y);
  if (!std::isfinite(base.loss)) throw NumericError("gradcheck: non-finite loss at the base point");
  model.backward(base.grad);

  GradcheckReport report;
  auto params = model.params();
  for (auto& p : params) {
    const std::vector<double> analytic(p.grad.begin(), p.grad.end());
    ParamCheck pc;
    pc.name = p.name;
    pc.size = p.value.size();
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double saved = p.value[i];
      p.value[i] = saved + step;
      const double up = loss_at(p.name);
      p.value[i] = saved - step;
      const double down = loss_at(p.name);
      p.value[i] = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double a = analytic[i];
      if (std::abs(a) + std::abs(numeric) <= floor) continue;
      ++pc.compared;
      const double rel = std::abs(a - numeric) / std::max(std::abs(a), std::abs(numeric));
      if (rel >= pc.max_rel_error) {
        pc.max_rel_error = rel;
        pc.worst_index = i;
        pc.analytic = a;
        pc.numeric = numeric;
      }
    }
    if (pc.max_rel_error >= report.max_rel_error) {
      report.max_rel_error = pc.max_rel_error;
      report.worst_param = pc.name;
    }
    report.params.push_back(std::move(pc));
  }
  return report;
}

}  // namespace wavenet
