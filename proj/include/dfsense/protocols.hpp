// Copyright 2026 The dfsense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <vector>

#include "dfsense/dfs.hpp"
#include "dfsense/fields.hpp"
#include "dfsense/statespace.hpp"

namespace dfsense {

/// Every sensor in the equal superposition of its levels.
PureState balanced_product_state(const SensorLevels &levels);

/// Optimal state of the widest DFS.
PureState swd_state(const DfsCensus &census, const DiagonalGenerator &g);

/// One row of the exponential-advantage study: m equidistant qubit sensors,
/// noise of Taylor orders 0..m-2, signal of order m-1, and sensor labels
/// +-r_i/2 for the kernel direction r.
struct AdvantageRow {
    std::size_t sensors = 0;
    RVector kernel;
    /// G[s] - G[-s] for the kernel pair.
    double delta = 0.0;
    double qfi_entangled = 0.0;
    /// 2^(1-m) Delta^2.
    double qfi_product_closed = 0.0;
    /// Balanced product state, dephased, via the block formula.
    double qfi_product_block = 0.0;
    /// Balanced product state, dephased, via the SLD.
    double qfi_product_sld = 0.0;
    /// sqrt(qfi_entangled / qfi_product_closed).
    double rmse_ratio = 0.0;
};

AdvantageRow exponential_advantage(std::size_t sensors, double kappa, double time, double spacing);

}  // namespace dfsense
