#pragma once

// Run reports in JSON, CSV and plain text. Numbers are written in shortest
// round-trip form, so reading a JSON or CSV report back gives the exact bounds.

#include <cstddef>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hsroot/bnb.hpp"
#include "hsroot/errors.hpp"
#include "hsroot/interval.hpp"
#include "hsroot/isolate.hpp"
#include "hsroot/poly.hpp"
#include "hsroot/version.hpp"

namespace hsroot {

inline constexpr int report_schema_version = 1;

struct RunReport {
    std::string system_name;
    std::vector<std::string> variables;
    Box initial_box;
    SolverConfig config;
    IsolateOptions options;
    Isolation result;
    double wall_seconds = 0;
};

namespace detail {

inline nlohmann::json box_json(const Box& b) {
    auto arr = nlohmann::json::array();
    for (const auto& x : b) arr.push_back({x.lo(), x.hi()});
    return arr;
}

inline Box box_from_json(const nlohmann::json& arr) {
    std::vector<Interval> iv;
    for (const auto& pair : arr) {
        if (!pair.is_array() || pair.size() != 2) throw SyntaxError("interval must be a [lo, hi] pair", 0, 0);
        iv.push_back(Interval::make(pair[0].get<double>(), pair[1].get<double>()));
    }
    return Box(std::move(iv));
}

template <typename T>
nlohmann::json optional_json(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace detail

inline nlohmann::json roots_json(const std::vector<RootBox>& roots) {
    auto arr = nlohmann::json::array();
    for (const auto& r : roots) {
        nlohmann::json item{{"intervals", detail::box_json(r.box)}, {"certified", r.certified}};
        if (r.degenerate) item["degenerate"] = true;
        arr.push_back(std::move(item));
    }
    return arr;
}

inline nlohmann::json to_json(const RunReport& rep) {
    const auto& cfg = rep.config;
    nlohmann::json j;
    j["schema_version"] = report_schema_version;
    j["version"] = std::string(version);
    j["system"] = {{"name", rep.system_name},
                   {"dimension", rep.variables.size()},
                   {"variables", rep.variables},
                   {"initial_box", detail::box_json(rep.initial_box)}};
    j["config"] = {{"target_width", cfg.target_width},
                   {"hs_enabled", cfg.hs_enabled},
                   {"hs_enable_round", detail::optional_json(cfg.hs_enable_round)},
                   {"hs_enable_width", detail::optional_json(cfg.hs_enable_width)},
                   {"hs_contract_output", cfg.hs_contract_output},
                   {"max_rounds", cfg.max_rounds},
                   {"max_boxes", cfg.max_boxes},
                   {"worker_count", cfg.worker_count},
                   {"batch_size", cfg.batch_size},
                   {"backtrack", rep.options.backtrack},
                   {"cluster", rep.options.cluster}};
    j["status"] = to_string(rep.result.search.status);

    auto rounds = nlohmann::json::array();
    for (const auto& st : rep.result.search.stats) {
        rounds.push_back({{"round", st.round},
                          {"boxes_in", st.boxes_in},
                          {"boxes_after_filter", st.boxes_after_filter},
                          {"boxes_after_hs", st.boxes_after_hs},
                          {"width", st.width},
                          {"elapsed_seconds", st.elapsed_seconds}});
    }
    j["rounds"] = std::move(rounds);
    j["terminal_boxes"] = rep.result.search.boxes.size();

    auto levels = nlohmann::json::array();
    for (const auto& l : rep.result.merge_levels) levels.push_back({{"width", l.width}, {"count", l.count}});
    j["merge_levels"] = std::move(levels);
    j["roots"] = roots_json(rep.result.roots);
    j["wall_seconds"] = rep.wall_seconds;
    return j;
}

/// Reads the root boxes back from a JSON report.
inline std::vector<RootBox> roots_from_json(const nlohmann::json& j) {
    std::vector<RootBox> out;
    for (const auto& item : j.at("roots")) {
        out.push_back({detail::box_from_json(item.at("intervals")), item.at("certified").get<bool>(),
                       item.value("degenerate", false)});
    }
    return out;
}

inline std::string to_csv(const RunReport& rep) {
    std::string out;
    for (const auto& v : rep.variables) out += v + "_lo," + v + "_hi,";
    out += "certified\n";
    for (const auto& r : rep.result.roots) {
        for (const auto& x : r.box) out += format_double(x.lo()) + "," + format_double(x.hi()) + ",";
        out += r.certified ? "true\n" : "false\n";
    }
    return out;
}

inline std::string to_text(const RunReport& rep, bool with_stats) {
    std::ostringstream os;
    const auto& res = rep.result;
    os << "system   " << rep.system_name << " (" << rep.variables.size() << " variables)\n";
    os << "status   " << to_string(res.search.status) << " after " << res.search.stats.size() << " rounds\n";

    if (with_stats) {
        os << "\nround        boxes  after filter      after hs        width   time(s)\n";
        for (const auto& st : res.search.stats) {
            os << std::setw(5) << st.round << std::setw(13) << st.boxes_in << std::setw(14) << st.boxes_after_filter
               << std::setw(14) << st.boxes_after_hs << std::setw(13) << std::setprecision(6) << st.width << std::setw(10)
               << std::fixed << std::setprecision(3) << st.elapsed_seconds << std::defaultfloat << "\n";
        }
        if (!res.merge_levels.empty()) {
            os << "\nbacktracking        width        boxes\n";
            for (const auto& l : res.merge_levels)
                os << std::setw(25) << std::setprecision(6) << l.width << std::setw(13) << l.count << "\n";
        }
    }

    std::size_t certified = 0;
    for (const auto& r : res.roots) certified += r.certified;
    os << "\n" << res.roots.size() << " root box" << (res.roots.size() == 1 ? "" : "es") << ", " << certified
       << " certified\n";
    for (std::size_t k = 0; k < res.roots.size(); ++k) {
        const auto& r = res.roots[k];
        os << std::setw(4) << k + 1 << "  ";
        for (std::size_t i = 0; i < r.box.size(); ++i) {
            if (i) os << ", ";
            os << rep.variables[i] << " in " << to_string(r.box[i]);
        }
        if (r.certified) os << "  [certified]";
        if (r.degenerate) os << "  [at resolution limit]";
        os << "\n";
    }
    os << "\nwall time " << std::fixed << std::setprecision(3) << rep.wall_seconds << " s\n";
    return os.str();
}

}  // namespace hsroot
