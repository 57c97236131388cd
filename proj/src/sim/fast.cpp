#include "internal.hpp"

namespace ldfec::sim::detail {

bool fast_path_applies(const Scenario& sc) {
    return sc.ideal_recovery && sc.mode == Mode::open_loop && sc.code.variant != codec::Variant::block;
}

// Idealized stream/group decoding without materialising packets. Consumes the erasure
// process exactly as the packet-level path does, so both produce identical reports.
SimReport run_fast_ideal(const Scenario& sc, std::uint64_t seed) {
    const int interval = sc.code.interval();
    const int ipi = sc.code.info_per_interval();
    const std::int64_t n = sc.padded_slots();
    channel::ErasureProcess erasures(sc.channel, seed);

    SimReport r;
    std::int64_t info = 0;
    std::int64_t unknowns = 0;
    std::int64_t rank = 0;
    std::int64_t start = 0;
    bool busy = false;
    bool touched = false;

    auto close = [&](std::int64_t slot) {
        for (std::int64_t j = r.delivered + 1; j <= info; ++j) {
            record_delay(r, slot - layout_send_slot(j, interval, ipi));
        }
        record_busy(r, (slot - start + interval - 1) / interval);
        busy = false;
        unknowns = 0;
        rank = 0;
    };

    int pos = 0;
    for (std::int64_t slot = 1; slot <= n; ++slot) {
        const bool erased = erasures.next();
        if (pos < ipi) {
            ++info;
            if (erased) {
                if (!busy) {
                    busy = true;
                    touched = true;
                    start = slot - 1 - pos;
                }
                ++unknowns;
            } else if (!busy) {
                record_delay(r, 0);
            }
        } else if (!erased && busy) {
            if (++rank == unknowns) {
                close(slot);
            }
        }
        if (++pos == interval) {
            pos = 0;
            if (!touched && !busy) {
                ++r.idle_intervals;
            }
            touched = busy;
        }
    }
    std::int64_t last = n;
    for (int t = 0; t < sc.tail_packets; ++t) {
        const std::int64_t slot = ++last;
        if (!erasures.next() && busy) {
            if (++rank == unknowns) {
                close(slot);
            }
        }
    }
    r.slots = last;
    r.regular_slots = n;
    r.info_sent = info;
    r.undelivered = info - r.delivered;
    r.intervals = n / interval;
    r.open_busy_intervals = busy ? (last - start + interval - 1) / interval : 0;
    return r;
}

}  // namespace ldfec::sim::detail
