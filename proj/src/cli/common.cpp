#include "common.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace nfkp::cli::detail {

LoopFn random_trig(std::mt19937_64& rng, int d, int M, int modes, double amp) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    LoopFn f(d, M);
    for (int m = 0; m <= modes && m <= M; ++m) {
        const double w = amp / (1.0 + m * m);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
                if (m == 0) {
                    f.at(0, r, c) = Complex{w * u(rng)};
                    continue;
                }
                const Complex z{w * u(rng), w * u(rng)};
                f.at(m, r, c) = z;
                f.at(-m, r, c) = std::conj(z);
            }
    }
    return f;
}

Symbol random_negative_symbol(std::mt19937_64& rng, const TruncParams& p, int lo, int modes) {
    Symbol s(p);
    for (int n = lo; n <= -1; ++n) s.set(n, random_trig(rng, p.d, p.M, modes, 1.0));
    const double nrm = norm(s);
    if (nrm > 0.0) s *= Complex{1.0 / nrm};
    return s;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const std::string& dir, const std::string& name, const std::string& text) {
    std::filesystem::create_directories(dir);
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

}  // namespace nfkp::cli::detail
