#pragma once

#include <random>
#include <string>

#include "nfkp/cli.hpp"

namespace nfkp::cli::detail {

/// Real-valued (on the circle) trig polynomial with modes |m| <= modes, all
/// matrix entries random, amplitude decaying like 1/(1+m^2).
LoopFn random_trig(std::mt19937_64& rng, int d, int M, int modes, double amp);

/// Random symbol supported on orders [lo, -1] with unit coefficient norm.
Symbol random_negative_symbol(std::mt19937_64& rng, const TruncParams& p, int lo, int modes);

/// "%.17g"
std::string num(double v);

/// Writes `text` to dir/name, creating dir. Throws std::runtime_error on failure.
void write_file(const std::string& dir, const std::string& name, const std::string& text);

}  // namespace nfkp::cli::detail
