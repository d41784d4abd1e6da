#pragma once

#include <string>

namespace plap::detail {

/// Shortest round-trip decimal representation, locale independent.
std::string format_double(double v);
double parse_double(const std::string& tok);

}  // namespace plap::detail
