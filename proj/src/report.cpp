#include "berger/report.hpp"

#include "berger/numfmt.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace berger {

namespace {

void write(std::ostream& os, const Json& j, int depth) {
    const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
    switch (j.type()) {
    case Json::value_t::number_float: {
        const double x = j.get<double>();
        os << (std::isfinite(x) ? fmt17(x) : "null");
        return;
    }
    case Json::value_t::array:
        if (j.empty()) {
            os << "[]";
            return;
        }
        os << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            os << pad;
            write(os, j[i], depth + 1);
            os << (i + 1 < j.size() ? ",\n" : "\n");
        }
        os << close << ']';
        return;
    case Json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        std::size_t i = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++i) {
            os << pad << Json(it.key()).dump() << ": ";
            write(os, it.value(), depth + 1);
            os << (i + 1 < j.size() ? ",\n" : "\n");
        }
        os << close << '}';
        return;
    }
    default:
        os << j.dump();
    }
}

std::string csv_number(double x) { return fmt17(x); }

}  // namespace

std::string dump_json(const Json& j) {
    std::ostringstream os;
    write(os, j, 0);
    os << '\n';
    return os.str();
}

Json to_json(const CheckReport& r) {
    Json j;
    j["id"] = r.id;
    j["status"] = to_string(r.status);
    j["passed"] = r.passed();
    j["pointwise_max_residual"] = r.pointwise_max_residual;
    j["integral_value"] = r.integral_value ? Json(*r.integral_value) : Json(nullptr);
    j["tolerance"] = r.tolerance;
    j["integral_tolerance"] = r.integral_tolerance;
    Json subs = Json::array();
    for (const auto& s : r.residuals) {
        Json e;
        e["id"] = s.id;
        e["max_abs"] = s.max_abs;
        e["integral"] = s.integral ? Json(*s.integral) : Json(nullptr);
        subs.push_back(std::move(e));
    }
    j["residuals"] = std::move(subs);
    Json values = Json::object();
    for (const auto& [k, v] : r.values) values[k] = v;
    j["values"] = std::move(values);
    Json flags = Json::object();
    for (const auto& [k, v] : r.flags) flags[k] = v;
    j["flags"] = std::move(flags);
    j["note"] = r.note;
    j["grid"] = {{"Nu", r.grid.nu}, {"Nv", r.grid.nv}, {"hu", r.grid.hu}, {"hv", r.grid.hv}, {"closed", r.grid.closed}};
    j["model"] = {{"kappa", r.kappa}, {"tau", r.tau}};
    j["surface"] = r.surface;
    return j;
}

Json to_json(const std::vector<CheckReport>& reports) {
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    return arr;
}

Json summarize(const std::vector<CheckReport>& reports) {
    int pass = 0, fail = 0, skip = 0;
    for (const auto& r : reports) {
        if (r.status == CheckStatus::Pass) ++pass;
        else if (r.status == CheckStatus::Fail) ++fail;
        else ++skip;
    }
    Json j;
    j["checks"] = static_cast<int>(reports.size());
    j["pass"] = pass;
    j["fail"] = fail;
    j["inapplicable"] = skip;
    return j;
}

void write_checks_csv(std::ostream& os, const std::vector<CheckReport>& reports) {
    os << "check,residual,status,max_abs,integral,tolerance,integral_tolerance\n";
    for (const auto& r : reports) {
        const std::string status = to_string(r.status);
        os << r.id << ',' << r.id << ',' << status << ',' << csv_number(r.pointwise_max_residual) << ','
           << (r.integral_value ? csv_number(*r.integral_value) : "") << ',' << csv_number(r.tolerance) << ','
           << csv_number(r.integral_tolerance) << '\n';
        for (const auto& s : r.residuals) {
            if (s.id == r.id) continue;
            os << r.id << ',' << s.id << ',' << status << ',' << csv_number(s.max_abs) << ','
               << (s.integral ? csv_number(*s.integral) : "") << ',' << csv_number(r.tolerance) << ','
               << csv_number(r.integral_tolerance) << '\n';
        }
    }
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace berger
