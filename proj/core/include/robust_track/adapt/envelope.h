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

#ifndef ROBUST_TRACK_ADAPT_ENVELOPE_H_
#define ROBUST_TRACK_ADAPT_ENVELOPE_H_

#include <string>
#include <vector>

#include "robust_track/numerics/types.h"

namespace robust_track::adapt {

using numerics::Mat;
using numerics::Vec;

struct GridAxis {
  double lo = 0.0;
  double hi = 1.0;
  int bins = 1;
};

// Axes spanning the data range of each column, widened by `margin` of the
// span on both sides.
std::vector<GridAxis> AxesFromData(const Mat& inputs, int bins,
                                   double margin = 0.05);

// Per-cell maximum of |mismatch| on a regular grid. Queries outside the
// grid use the nearest boundary cell; cells without samples take the value
// of the nearest occupied cell in index space.
class EnvelopeGrid {
 public:
  EnvelopeGrid() = default;

  // Throws std::invalid_argument on an empty trace or shape mismatch.
  static EnvelopeGrid Build(std::vector<GridAxis> axes, const Mat& inputs,
                            const Vec& mismatch);

  double Raw(const Vec& x) const;
  double Bound(const Vec& x, double alpha) const { return alpha * Raw(x); }

  std::size_t cell_count() const { return values_.size(); }
  // Fraction of cells that held at least one sample.
  double occupancy() const;
  const std::vector<GridAxis>& axes() const { return axes_; }
  const std::vector<double>& values() const { return values_; }
  bool empty() const { return values_.empty(); }

  // One row per cell: cell centre coordinates, bound, occupied flag.
  void SaveCsv(const std::string& path) const;

 private:
  std::size_t CellIndex(const Vec& x) const;

  std::vector<GridAxis> axes_;
  std::vector<double> values_;
  std::vector<char> occupied_;
};

// Fraction of samples whose |mismatch| lies within alpha * bound(x).
double Coverage(const EnvelopeGrid& grid, double alpha, const Mat& inputs,
                const Vec& mismatch);

// Internal (GPR vs nominal model) and external (truth vs GPR) envelopes.
struct EnvelopeTable {
  EnvelopeGrid internal;
  EnvelopeGrid external;
  double alpha_i = 1.0;
  double alpha_e = 1.0;

  double Bound(const Vec& x) const {
    return internal.Bound(x, alpha_i) + external.Bound(x, alpha_e);
  }
};

EnvelopeTable BuildEnvelopes(const std::vector<GridAxis>& axes,
                             const Mat& inputs, const Vec& gpr, const Vec& rls,
                             const Vec& truth, double alpha_i, double alpha_e);

}  // namespace robust_track::adapt

#endif  // ROBUST_TRACK_ADAPT_ENVELOPE_H_
