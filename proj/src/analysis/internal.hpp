#pragma once

#include <cstdint>

namespace ldfec::analysis::detail {

void check_epsilon(double epsilon);
void check_stream(int l, double epsilon);
double relative_entropy(double a, double b);
std::int64_t truncation_point(double rate, double tail_tolerance);

}  // namespace ldfec::analysis::detail
