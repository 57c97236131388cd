#include <stdexcept>

#include "ldfec/codec.hpp"

namespace ldfec::codec {

std::string to_string(Variant v) {
    switch (v) {
        case Variant::stream:
            return "stream";
        case Variant::group:
            return "group";
        case Variant::block:
            return "block";
    }
    return "unknown";
}

Variant variant_from_string(const std::string& name) {
    if (name == "stream") {
        return Variant::stream;
    }
    if (name == "group") {
        return Variant::group;
    }
    if (name == "block") {
        return Variant::block;
    }
    throw std::invalid_argument("unknown code variant '" + name + "'");
}

CodeParams CodeParams::stream(int l) {
    CodeParams p;
    p.variant = Variant::stream;
    p.l = l;
    p.lg = l;
    p.c = 1;
    p.validate();
    return p;
}

CodeParams CodeParams::group(int lg, int c) {
    CodeParams p;
    p.variant = Variant::group;
    p.lg = lg;
    p.c = c;
    p.validate();
    return p;
}

CodeParams CodeParams::block(int n, int k) {
    CodeParams p;
    p.variant = Variant::block;
    p.n = n;
    p.k = k;
    p.c = n - k;
    p.validate();
    return p;
}

void CodeParams::validate() const {
    switch (variant) {
        case Variant::stream:
            if (l < 2) {
                throw std::invalid_argument("stream code requires l >= 2");
            }
            break;
        case Variant::group:
            if (c < 1 || lg <= c) {
                throw std::invalid_argument("group code requires 1 <= c < lg");
            }
            break;
        case Variant::block:
            if (k < 1 || n < k) {
                throw std::invalid_argument("block code requires 1 <= k <= n");
            }
            break;
    }
}

double CodeParams::rate() const {
    switch (variant) {
        case Variant::stream:
            return static_cast<double>(l - 1) / l;
        case Variant::group:
            return 1.0 - static_cast<double>(c) / lg;
        case Variant::block:
            return static_cast<double>(k) / n;
    }
    return 0.0;
}

int CodeParams::interval() const {
    switch (variant) {
        case Variant::stream:
            return l;
        case Variant::group:
            return lg;
        case Variant::block:
            return n;
    }
    return 0;
}

int CodeParams::coded_per_interval() const {
    switch (variant) {
        case Variant::stream:
            return 1;
        case Variant::group:
            return c;
        case Variant::block:
            return n - k;
    }
    return 0;
}

}  // namespace ldfec::codec
