#pragma once

#include <cstdint>
#include <vector>

#include "ldfec/sim.hpp"

namespace ldfec::sim::detail {

// Transmission slot of info packet j under the regular stream/group layout.
inline std::int64_t layout_send_slot(std::int64_t j, int interval, int info_per_interval) {
    return ((j - 1) / info_per_interval) * interval + ((j - 1) % info_per_interval) + 1;
}

inline void record_delay(SimReport& r, std::int64_t delay) {
    const auto d = static_cast<std::size_t>(delay);
    if (r.delay_histogram.size() <= d) {
        r.delay_histogram.resize(d + 1, 0);
    }
    ++r.delay_histogram[d];
    r.delay_sum += delay;
    ++r.delivered;
}

inline void record_busy(SimReport& r, std::int64_t length) {
    const auto s = static_cast<std::size_t>(length);
    if (r.busy_histogram.size() <= s) {
        r.busy_histogram.resize(s + 1, 0);
    }
    ++r.busy_histogram[s];
}

bool fast_path_applies(const Scenario& sc);
SimReport run_fast_ideal(const Scenario& sc, std::uint64_t seed);

}  // namespace ldfec::sim::detail
