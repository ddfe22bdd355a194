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

#include "dfsense/protocols.hpp"

#include <cmath>
#include <vector>

#include "dfsense/channels.hpp"
#include "dfsense/metrology.hpp"

namespace dfsense {

PureState balanced_product_state(const SensorLevels &levels) {
    std::vector<CVector> factors;
    for (std::size_t i = 0; i < levels.sensor_count(); ++i) {
        factors.push_back(CVector::Ones(static_cast<Eigen::Index>(levels.levels(i))));
    }
    return product_state(factors);
}

PureState swd_state(const DfsCensus &census, const DiagonalGenerator &g) {
    return optimal_state(best_dfs(census.subspaces, g), g);
}

AdvantageRow exponential_advantage(std::size_t sensors, double kappa, double time, double spacing) {
    require(sensors >= 2, "the advantage study needs at least two sensors");
    SensorLayout layout = SensorLayout::equidistant(sensors, spacing);
    std::vector<FieldComponent> noise;
    for (std::size_t k = 0; k + 2 <= sensors; ++k) {
        noise.push_back(FieldComponent::polynomial(static_cast<int>(k)));
    }
    FieldComponent signal = FieldComponent::polynomial(static_cast<int>(sensors - 1));

    AdvantageRow row;
    row.sensors = sensors;
    row.kernel = kernel_direction(noise_matrix(noise, layout));
    std::vector<std::vector<double>> labels;
    for (Eigen::Index i = 0; i < row.kernel.size(); ++i) {
        double h = std::abs(row.kernel[i]) / 2.0;
        require(h > 0.0, "kernel direction has a zero entry; no qubit encoding");
        labels.push_back({-h, h});
    }
    SensorLevels levels(labels);
    DfsCensus census = enumerate_dfs(levels, layout, noise);
    DiagonalGenerator g = build_signal_generator(layout, signal, kappa, time, levels);

    // The kernel pair: s_i = r_i / 2 and its negation.
    std::vector<double> s(sensors), ms(sensors);
    for (std::size_t i = 0; i < sensors; ++i) {
        s[i] = row.kernel[static_cast<Eigen::Index>(i)] / 2.0;
        ms[i] = -s[i];
    }
    row.delta = std::abs(g[levels.index_of(s)] - g[levels.index_of(ms)]);
    row.qfi_entangled = qfi_pure(swd_state(census, g), g);
    row.qfi_product_closed = std::ldexp(row.delta * row.delta, 1 - static_cast<int>(sensors));

    PureState product = balanced_product_state(levels);
    row.qfi_product_block = qfi_dephased_pure(product, census, g);
    DensityMatrix dephased = overwhelming_dephasing(DensityMatrix::from_pure(product), census);
    row.qfi_product_sld = sld_and_qfi(dephased, signal_derivative(dephased, g)).qfi;
    row.rmse_ratio = std::sqrt(row.qfi_entangled / row.qfi_product_closed);
    return row;
}

}  // namespace dfsense
