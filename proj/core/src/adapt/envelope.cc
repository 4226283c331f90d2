// Copyright 2026 The robust_track Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "robust_track/adapt/envelope.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "robust_track/common/errors.h"

namespace robust_track::adapt {
namespace {

std::vector<int> Unravel(std::size_t index, const std::vector<GridAxis>& axes) {
  std::vector<int> idx(axes.size());
  for (std::size_t d = axes.size(); d-- > 0;) {
    idx[d] = static_cast<int>(index % static_cast<std::size_t>(axes[d].bins));
    index /= static_cast<std::size_t>(axes[d].bins);
  }
  return idx;
}

}  // namespace

std::vector<GridAxis> AxesFromData(const Mat& inputs, int bins, double margin) {
  if (inputs.rows() == 0 || bins < 1) {
    throw std::invalid_argument("AxesFromData: empty inputs or bins < 1");
  }
  std::vector<GridAxis> axes;
  for (Eigen::Index j = 0; j < inputs.cols(); ++j) {
    const double lo = inputs.col(j).minCoeff();
    const double hi = inputs.col(j).maxCoeff();
    const double pad = std::max(margin * (hi - lo), 1e-9);
    axes.push_back({lo - pad, hi + pad, bins});
  }
  return axes;
}

std::size_t EnvelopeGrid::CellIndex(const Vec& x) const {
  std::size_t index = 0;
  for (std::size_t d = 0; d < axes_.size(); ++d) {
    const GridAxis& a = axes_[d];
    const double t = (x[static_cast<Eigen::Index>(d)] - a.lo) / (a.hi - a.lo);
    const int bin =
        std::clamp(static_cast<int>(std::floor(t * a.bins)), 0, a.bins - 1);
    index = index * static_cast<std::size_t>(a.bins) +
            static_cast<std::size_t>(bin);
  }
  return index;
}

EnvelopeGrid EnvelopeGrid::Build(std::vector<GridAxis> axes, const Mat& inputs,
                                 const Vec& mismatch) {
  if (inputs.rows() == 0) {
    throw std::invalid_argument("EnvelopeGrid: empty trace");
  }
  if (inputs.rows() != mismatch.size() ||
      static_cast<std::size_t>(inputs.cols()) != axes.size()) {
    throw std::invalid_argument("EnvelopeGrid: shape mismatch");
  }
  std::size_t cells = 1;
  for (const GridAxis& a : axes) {
    if (a.bins < 1 || !(a.hi > a.lo)) {
      throw std::invalid_argument("EnvelopeGrid: invalid axis");
    }
    cells *= static_cast<std::size_t>(a.bins);
  }
  EnvelopeGrid g;
  g.axes_ = std::move(axes);
  g.values_.assign(cells, 0.0);
  g.occupied_.assign(cells, 0);
  for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
    const std::size_t c = g.CellIndex(inputs.row(i).transpose());
    g.values_[c] = std::max(g.values_[c], std::abs(mismatch[i]));
    g.occupied_[c] = 1;
  }
  std::vector<std::size_t> filled;
  for (std::size_t c = 0; c < cells; ++c) {
    if (g.occupied_[c]) filled.push_back(c);
  }
  std::vector<std::vector<int>> filled_idx;
  for (std::size_t c : filled) filled_idx.push_back(Unravel(c, g.axes_));
  for (std::size_t c = 0; c < cells; ++c) {
    if (g.occupied_[c]) continue;
    const std::vector<int> idx = Unravel(c, g.axes_);
    double best = std::numeric_limits<double>::infinity();
    double value = 0.0;
    for (std::size_t k = 0; k < filled.size(); ++k) {
      double d2 = 0.0;
      for (std::size_t d = 0; d < idx.size(); ++d) {
        const double diff = idx[d] - filled_idx[k][d];
        d2 += diff * diff;
      }
      // Ties resolve to the larger bound.
      if (d2 < best || (d2 == best && g.values_[filled[k]] > value)) {
        best = d2;
        value = g.values_[filled[k]];
      }
    }
    g.values_[c] = value;
  }
  return g;
}

double EnvelopeGrid::Raw(const Vec& x) const {
  if (values_.empty()) return 0.0;
  return values_[CellIndex(x)];
}

double EnvelopeGrid::occupancy() const {
  if (occupied_.empty()) return 0.0;
  const auto n = std::count(occupied_.begin(), occupied_.end(), 1);
  return static_cast<double>(n) / static_cast<double>(occupied_.size());
}

void EnvelopeGrid::SaveCsv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (std::size_t d = 0; d < axes_.size(); ++d) out << "x" << d << ',';
  out << "bound,occupied\n";
  char buf[64];
  for (std::size_t c = 0; c < values_.size(); ++c) {
    const std::vector<int> idx = Unravel(c, axes_);
    for (std::size_t d = 0; d < axes_.size(); ++d) {
      const GridAxis& a = axes_[d];
      std::snprintf(buf, sizeof buf, "%.17g,",
                    a.lo + (idx[d] + 0.5) * (a.hi - a.lo) / a.bins);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", values_[c]);
    out << buf << ',' << static_cast<int>(occupied_[c]) << '\n';
  }
  if (!out) throw IoError("write failed for " + path);
}

double Coverage(const EnvelopeGrid& grid, double alpha, const Mat& inputs,
                const Vec& mismatch) {
  if (inputs.rows() == 0) return 0.0;
  long inside = 0;
  for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
    if (std::abs(mismatch[i]) <= grid.Bound(inputs.row(i).transpose(), alpha)) {
      ++inside;
    }
  }
  return static_cast<double>(inside) / static_cast<double>(inputs.rows());
}

EnvelopeTable BuildEnvelopes(const std::vector<GridAxis>& axes,
                             const Mat& inputs, const Vec& gpr, const Vec& rls,
                             const Vec& truth, double alpha_i, double alpha_e) {
  if (gpr.size() != rls.size() || gpr.size() != truth.size()) {
    throw std::invalid_argument("BuildEnvelopes: traces are not aligned");
  }
  EnvelopeTable table;
  table.internal = EnvelopeGrid::Build(axes, inputs, gpr - rls);
  table.external = EnvelopeGrid::Build(axes, inputs, truth - gpr);
  table.alpha_i = alpha_i;
  table.alpha_e = alpha_e;
  return table;
}

}  // namespace robust_track::adapt
