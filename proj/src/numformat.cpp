#include "spamtree/numformat.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace spamtree {

std::string shortest_decimal(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_weight(double v) {
    if (v == std::floor(v) && std::fabs(v) < 1e15) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.0f.0", v);
        return buf;
    }
    return shortest_decimal(v);
}

std::string format_counts(double covered, double errors) {
    if (errors == 0.0) return "(" + format_weight(covered) + ")";
    return "(" + format_weight(covered) + "/" + format_weight(errors) + ")";
}

double round_half_up(double v, int decimals) {
    double scale = std::pow(10.0, decimals);
    return std::floor(v * scale + 0.5) / scale;
}

std::string format_fixed(double v, int decimals) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, round_half_up(v, decimals));
    return buf;
}

}  // namespace spamtree
