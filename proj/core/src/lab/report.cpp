#include "shocklab/lab/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "shocklab/errors.hpp"

namespace shocklab::lab {

namespace {
// JSON has no inf/nan; keep them readable instead of silently nulling.
Json sanitize(Json j) {
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (std::isnan(v)) return "nan";
        if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
        return j;
    }
    if (j.is_object() || j.is_array())
        for (auto& el : j) el = sanitize(el);
    return j;
}
} // namespace

void Report::add(const std::string& experiment, std::uint64_t seed, double t, Json payload) {
    Json rec = payload.is_object() ? std::move(payload) : Json{{"value", std::move(payload)}};
    rec["experiment"] = experiment;
    rec["config_hash"] = hash_;
    rec["seed"] = seed;
    rec["t"] = t;
    records_.push_back(sanitize(std::move(rec)));
}

void Report::check(const std::string& experiment, const std::string& name, std::uint64_t seed, double t, double value,
                   double tolerance, bool pass, bool hard, Json extra) {
    extra["check"] = name;
    extra["value"] = value;
    extra["tolerance"] = tolerance;
    extra["pass"] = pass;
    extra["hard"] = hard;
    if (hard && !pass) hard_failure_ = true;
    add(experiment, seed, t, std::move(extra));
}

std::vector<Json> Report::sorted() const {
    std::vector<std::size_t> idx(records_.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const auto& ra = records_[a];
        const auto& rb = records_[b];
        const auto ea = ra["experiment"].get<std::string>(), eb = rb["experiment"].get<std::string>();
        if (ea != eb) return ea < eb;
        const auto sa = ra["seed"].get<std::uint64_t>(), sb = rb["seed"].get<std::uint64_t>();
        if (sa != sb) return sa < sb;
        return ra["t"].get<double>() < rb["t"].get<double>();
    });
    std::vector<Json> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(records_[i]);
    return out;
}

void Report::write(std::ostream& os) const {
    for (const auto& r : sorted()) os << r.dump() << '\n';
}

void Report::write(const std::filesystem::path& path) const {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write report to " + path.string());
    write(out);
}

} // namespace shocklab::lab
