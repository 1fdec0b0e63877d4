#include <algorithm>
#include <cmath>

#include "homlab/errors.hpp"
#include "homlab/protocols.hpp"

namespace homlab::protocols {

void Sweep::validate() const {
    if (count < 2) throw ContractViolation("sweep count must be at least 2");
    if (!std::isfinite(start) || !std::isfinite(stop)) throw ContractViolation("sweep bounds must be finite");
}

double Sweep::at(int i) const {
    if (i == count - 1) return stop;
    return start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
}

std::vector<double> Sweep::values() const {
    validate();
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = at(i);
    return v;
}

ProtocolResult::ProtocolResult(std::string sweep_name, std::vector<double> sweep_values)
    : sweep_name_(std::move(sweep_name)), sweep_(std::move(sweep_values)) {
    for (double x : sweep_)
        if (!std::isfinite(x)) throw InvariantViolation("ProtocolResult: non-finite sweep value");
}

void ProtocolResult::add_column(std::string name, std::string provenance, std::vector<double> values) {
    if (values.size() != sweep_.size())
        throw InvariantViolation("ProtocolResult: column '" + name + "' has the wrong length");
    for (double x : values)
        if (!std::isfinite(x)) throw InvariantViolation("ProtocolResult: column '" + name + "' is not finite");
    columns_.push_back({std::move(name), std::move(provenance), std::move(values)});
}

void ProtocolResult::add_complex_column(const std::string& name, const std::string& provenance,
                                        const std::vector<cplx>& values) {
    std::vector<double> re(values.size()), im(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        re[i] = values[i].real();
        im[i] = values[i].imag();
    }
    add_column(name + "_re", provenance, std::move(re));
    add_column(name + "_im", provenance, std::move(im));
}

void ProtocolResult::set_metadata(std::string key, std::string value) {
    for (auto& [k, v] : metadata_)
        if (k == key) {
            v = std::move(value);
            return;
        }
    metadata_.emplace_back(std::move(key), std::move(value));
}

const Column& ProtocolResult::column(const std::string& name) const {
    for (const auto& c : columns_)
        if (c.name == name) return c;
    throw ContractViolation("ProtocolResult: no column named '" + name + "'");
}

Peak maximize(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

Peak column_peak(const ProtocolResult& result, const std::string& name) {
    const auto& values = result.column(name).values;
    const auto it = std::max_element(values.begin(), values.end());
    const auto i = static_cast<std::size_t>(it - values.begin());
    return {result.sweep()[i], *it};
}

}  // namespace homlab::protocols
