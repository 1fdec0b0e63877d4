#include "homlab/format.hpp"

#include <charconv>
#include <system_error>

namespace homlab {

std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    if (res.ec != std::errc{}) return "nan";
    return {buf, res.ptr};
}

}  // namespace homlab
