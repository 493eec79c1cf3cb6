#include "wavenet/dataset.hpp"

#include <algorithm>

#include "wavenet/error.hpp"

namespace wavenet {

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.sample_rate = sample_rate;
  out.x = Tensor3(rows.size(), x.c, x.t);
  out.y.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= size()) throw ContractError("Dataset::subset: row index out of range");
    const auto src = x.sample(rows[i]);
    std::copy(src.begin(), src.end(), out.x.sample(i).begin());
    out.y.push_back(y[rows[i]]);
  }
  return out;
}

Dataset make_dataset_from_rows(const std::vector<std::vector<double>>& rows, std::vector<int> labels,
                               double sample_rate) {
  if (rows.size() != labels.size()) throw ContractError("dataset: row/label count mismatch");
  if (rows.empty()) throw DomainError("dataset: no rows");
  const std::size_t t = rows.front().size();
  Dataset d;
  d.sample_rate = sample_rate;
  d.x = Tensor3(rows.size(), 1, t);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != t) throw ContractError("dataset: ragged rows");
    std::copy(rows[i].begin(), rows[i].end(), d.x.row(i, 0).begin());
  }
  d.y = std::move(labels);
  return d;
}

}  // namespace wavenet
