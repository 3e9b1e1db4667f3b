// Acceptance checks. Each criterion prints its evidence followed by a single
// "criterion N: PASS" or "criterion N: FAIL" line.
//
//   acceptance                 run every criterion
//   acceptance --criterion N   run one

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "corpus_files.hpp"
#include "exact.hpp"
#include "hsroot/hansen.hpp"
#include "hsroot/isolate.hpp"
#include "hsroot/linalg.hpp"
#include "newton_oracle.hpp"

using namespace hsroot;
using testing_support::encloses;
using testing_support::exact;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t) {
    return std::chrono::duration<double>(clock_type::now() - t).count();
}

struct Expected {
    const char* name;
    int roots;
};

// Small systems, with root counts from the published benchmark table.
const std::vector<Expected> small_systems = {
    {"mickey", 2},   {"barry", 2},    {"noon3", 7},    {"morgan", 2},   {"katsura3", 2}, {"cyclic4", 8},
    {"caprasse", 18}, {"noon4", 15},  {"solotarev", 6}, {"conform1", 0}, {"sparse5", 0},
};

const std::vector<Expected> medium_systems = {
    {"katsura4", 8}, {"eco5", 4},     {"redeco5", 4}, {"wright", 32},  {"cyclic5", 10},
    {"boon", 8},     {"eco6", 4},     {"katsura5", 8}, {"trinks1", 8}, {"romin", 4},
};

bool in_corpus(const std::string& name) {
    return std::filesystem::exists(std::string(HSROOT_CORPUS_DIR) + "/" + name + ".sys");
}

// The tool's default configuration.
SolverConfig default_config(const PolySystem& s) {
    SolverConfig cfg;
    cfg.target_width = s.initial_box.max_width() / 1024;
    cfg.worker_count = default_worker_count();
    cfg.max_boxes = 2'000'000;
    return cfg;
}

struct Solved {
    PolySystem system;
    Isolation result;
    double seconds = 0;
};

Solved solve_default(const std::string& name) {
    Solved out{testing_support::load_system(name), {}, 0};
    const auto start = clock_type::now();
    out.result = isolate(out.system, default_config(out.system));
    out.seconds = seconds_since(start);
    return out;
}

bool inside(const Box& b, const oracle::Vec& x, long double slack = 0) {
    for (std::size_t j = 0; j < b.size(); ++j)
        if (x[j] < b[j].lo() - slack || x[j] > b[j].hi() + slack) return false;
    return true;
}

bool verdict(int n, bool pass) {
    std::cout << "criterion " << n << ": " << (pass ? "PASS" : "FAIL") << std::endl;
    return pass;
}

// ---------------------------------------------------------------------------

bool root_counts(int n, const std::vector<Expected>& systems, double time_limit) {
    bool pass = true;
    for (const auto& e : systems) {
        if (!in_corpus(e.name)) {
            std::cout << "  " << std::left << std::setw(10) << e.name << " expected " << e.roots
                      << ": not in corpus (equations unavailable)\n";
            pass = false;
            continue;
        }
        const auto r = solve_default(e.name);
        const auto status = r.result.search.status;
        const int got = static_cast<int>(r.result.roots.size());
        bool ok = status != SolveStatus::budget_exhausted && got == e.roots && r.seconds < time_limit;
        if (e.roots == 0) ok = ok && status == SolveStatus::no_real_solution;
        std::cout << "  " << std::left << std::setw(10) << e.name << " expected " << std::setw(3) << e.roots
                  << " got " << std::setw(3) << got << " " << std::setw(15) << to_string(status) << std::right
                  << std::fixed << std::setprecision(2) << std::setw(8) << r.seconds << " s"
                  << std::defaultfloat << (ok ? "" : "  MISMATCH") << "\n";
        pass = pass && ok;
    }
    return verdict(n, pass);
}

bool criterion_1() { return root_counts(1, small_systems, 60); }
bool criterion_2() { return root_counts(2, medium_systems, 900); }

bool criterion_3() {
    bool pass = true;
    for (const auto& [name, final_count] : std::vector<std::pair<const char*, std::size_t>>{{"noon3", 7}, {"noon4", 15}}) {
        const auto r = solve_default(name);
        const auto& levels = r.result.merge_levels;
        std::cout << "  " << name << " merge levels:";
        for (const auto& l : levels) std::cout << " " << l.count << "@" << format_double(l.width);
        std::cout << "\n";
        bool ok = levels.size() >= 2;
        for (std::size_t k = 1; k < levels.size(); ++k) ok = ok && levels[k].count <= levels[k - 1].count;
        ok = ok && levels.back().count == levels[levels.size() - 2].count;
        std::cout << "  " << name << " final root boxes " << r.result.roots.size() << " (expected " << final_count
                  << ")\n";
        ok = ok && r.result.roots.size() == final_count;
        pass = pass && ok;
    }
    return verdict(3, pass);
}

bool criterion_4() {
    bool pass = true;
    for (const auto& e : small_systems) {
        if (!in_corpus(e.name)) {
            std::cout << "  " << e.name << ": not in corpus\n";
            pass = false;
            continue;
        }
        const auto r = solve_default(e.name);
        const oracle::System sys(r.system);
        int good = 0;
        const int total = static_cast<int>(r.result.roots.size());
        for (const auto& rb : r.result.roots) {
            oracle::Vec x;
            for (const auto& c : rb.box) x.push_back((static_cast<long double>(c.lo()) + c.hi()) / 2);
            const auto refined = oracle::newton(sys, x);
            const bool ok = refined.residual < 1e-9L && inside(rb.box, refined.x);
            good += ok;
        }
        std::cout << "  " << std::left << std::setw(10) << e.name << std::right << good << "/" << total
                  << " boxes refine to a root inside the box\n";
        pass = pass && good == total;
    }
    return verdict(4, pass);
}

bool criterion_5() {
    bool pass = true;
    for (const auto& e : small_systems) {
        if (!in_corpus(e.name)) {
            std::cout << "  " << e.name << ": not in corpus\n";
            pass = false;
            continue;
        }
        const auto r = solve_default(e.name);
        const auto roots = oracle::sample_roots(r.system, 10000, 2024);
        int exactly_one = 0;
        for (const auto& root : roots) {
            int holders = 0;
            for (const auto& rb : r.result.roots) holders += inside(rb.box, root);
            exactly_one += holders == 1;
        }
        std::cout << "  " << std::left << std::setw(10) << e.name << std::right << exactly_one << "/" << roots.size()
                  << " oracle roots in exactly one of " << r.result.roots.size() << " boxes\n";
        pass = pass && exactly_one == static_cast<int>(roots.size());
    }
    return verdict(5, pass);
}

// ---------------------------------------------------------------------------
// Interval kernel

bool piece_holds(const ExtendedDivResult& r, const mpq_class& q) {
    switch (r.kind()) {
        case ExtendedDivResult::Kind::empty: return false;
        case ExtendedDivResult::Kind::whole: return true;
        case ExtendedDivResult::Kind::single: return encloses(r.first(), q);
        case ExtendedDivResult::Kind::split: return encloses(r.first(), q) || encloses(r.second(), q);
    }
    return false;
}

bool criterion_6() {
    using testing_support::random_interval;
    using testing_support::random_signed;
    using testing_support::sample;
    using testing_support::Sign;
    const auto start = clock_type::now();
    std::mt19937_64 rng(606);
    constexpr int pairs = 10000;
    std::map<std::string, int> failures;

    auto binary = [&](const std::string& op, auto&& interval_op, auto&& exact_op) {
        int bad = 0;
        for (int k = 0; k < pairs; ++k) {
            const Interval x = random_interval(rng), y = random_interval(rng);
            const Interval z = interval_op(x, y);
            for (int s = 0; s < 4; ++s) {
                const mpq_class v = exact_op(exact(sample(rng, x)), exact(sample(rng, y)));
                bad += !encloses(z, v);
            }
        }
        failures[op] = bad;
    };
    binary("add", [](auto& a, auto& b) { return add(a, b); }, [](const mpq_class& a, const mpq_class& b) { return mpq_class(a + b); });
    binary("sub", [](auto& a, auto& b) { return sub(a, b); }, [](const mpq_class& a, const mpq_class& b) { return mpq_class(a - b); });
    binary("mul", [](auto& a, auto& b) { return mul(a, b); }, [](const mpq_class& a, const mpq_class& b) { return mpq_class(a * b); });

    {
        int bad = 0;
        for (int k = 0; k < pairs; ++k) {
            const Interval x = random_interval(rng, 8);
            const unsigned e = 1 + k % 9;
            const Interval z = pow(x, e);
            for (int s = 0; s < 4; ++s) {
                const mpq_class b = exact(sample(rng, x));
                mpq_class v = 1;
                for (unsigned i = 0; i < e; ++i) v *= b;
                bad += !encloses(z, v);
            }
        }
        failures["pow"] = bad;
    }

    // Seven divisor/dividend classes for extended division.
    struct DivClass {
        const char* name;
        std::function<Interval()> x, y;
    };
    auto any_x = [&] { return random_interval(rng); };
    auto zero_x = [&] { return random_signed(rng, Sign::straddle); };
    auto nonzero_x = [&] {
        return random_signed(rng, std::bernoulli_distribution(0.5)(rng) ? Sign::positive : Sign::negative);
    };
    const std::vector<DivClass> classes = {
        {"y>0", any_x, [&] { return random_signed(rng, Sign::positive); }},
        {"y<0", any_x, [&] { return random_signed(rng, Sign::negative); }},
        {"y=[0,0]", any_x, [] { return Interval(0.0); }},
        {"y=[0,b]", nonzero_x, [&] { return random_signed(rng, Sign::zero_lo); }},
        {"y=[a,0]", nonzero_x, [&] { return random_signed(rng, Sign::zero_hi); }},
        {"a<0<b", nonzero_x, [&] { return random_signed(rng, Sign::straddle); }},
        {"0 in x and y", zero_x, [&] { return random_signed(rng, Sign::straddle); }},
    };
    for (const auto& c : classes) {
        int bad = 0;
        for (int k = 0; k < pairs; ++k) {
            const Interval x = c.x(), y = c.y();
            const auto r = div_extended(x, y);
            for (int s = 0; s < 4; ++s) {
                const double yv = sample(rng, y);
                if (yv == 0) continue;
                bad += !piece_holds(r, exact(sample(rng, x)) / exact(yv));
            }
        }
        failures[std::string("div_extended ") + c.name] = bad;
    }

    bool pass = true;
    for (const auto& [op, bad] : failures) {
        std::cout << "  " << std::left << std::setw(26) << op << std::right << bad << " inclusion failures\n";
        pass = pass && bad == 0;
    }
    const double t = seconds_since(start);
    std::cout << "  suite time " << std::fixed << std::setprecision(2) << t << " s" << std::defaultfloat << "\n";
    return verdict(6, pass && t < 30);
}

// ---------------------------------------------------------------------------
// Linear algebra

bool criterion_7() {
    std::mt19937_64 rng(707);
    std::uniform_real_distribution<double> u(-10, 10);
    int product_failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + trial % 4;
        PointMatrix a(n, n), b(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) = std::ldexp(u(rng), std::uniform_int_distribution<int>(-20, 20)(rng));
                b(i, j) = std::ldexp(u(rng), std::uniform_int_distribution<int>(-20, 20)(rng));
            }
        const auto c = imatmul(to_interval(a), to_interval(b));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                mpq_class s = 0;
                for (std::size_t k = 0; k < n; ++k) s += exact(a(i, k)) * exact(b(k, j));
                product_failures += !encloses(c(i, j), s);
            }
    }
    std::cout << "  imatmul: " << product_failures << " containment failures in 1000 products\n";

    int inverse_failures = 0, tried = 0;
    double worst = 0;
    while (tried < 1000) {
        const std::size_t n = 1 + tried % 9;
        PointMatrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = u(rng);
        PointMatrix inv;
        try {
            inv = gauss_jordan_inverse(a);
        } catch (const SingularMatrix&) {
            continue;
        }
        // Condition number in the infinity norm; keep matrices below 1e6.
        auto norm = [n](const PointMatrix& m) {
            double w = 0;
            for (std::size_t i = 0; i < n; ++i) {
                double row = 0;
                for (std::size_t j = 0; j < n; ++j) row += std::fabs(m(i, j));
                w = std::max(w, row);
            }
            return w;
        };
        if (norm(a) * norm(inv) >= 1e6) continue;
        ++tried;
        mpq_class res = 0;
        for (std::size_t i = 0; i < n; ++i) {
            mpq_class row = 0;
            for (std::size_t j = 0; j < n; ++j) {
                mpq_class s = i == j ? -1 : 0;
                for (std::size_t k = 0; k < n; ++k) s += exact(a(i, k)) * exact(inv(k, j));
                row += abs(s);
            }
            res = std::max(res, row);
        }
        worst = std::max(worst, res.get_d());
        inverse_failures += res.get_d() >= 1e-8;
    }
    std::cout << "  gauss_jordan_inverse: " << inverse_failures << " residual failures in 1000, worst "
              << worst << "\n";
    return verdict(7, product_failures == 0 && inverse_failures == 0);
}

// ---------------------------------------------------------------------------

bool criterion_8() {
    bool pass = true;
    {
        const SystemEvaluator ev(parse_system("vars: x y\ninit: x in [0,2]; y in [0,3]\neq: x - 1\neq: y - 2"));
        const auto out = contract(ev, Box{Interval::make(0, 2), Interval::make(0, 3)});
        const bool ok = out.kind == ContractionOutcome::Kind::boxes && out.boxes.size() == 1 &&
                        out.existence_certified && width(out.boxes[0][0]) < 1e-8 &&
                        width(out.boxes[0][1]) < 1e-8 && out.boxes[0][0].contains(1) && out.boxes[0][1].contains(2);
        std::cout << "  linear system: "
                  << (out.boxes.empty() ? std::string("no box") : to_string(out.boxes[0]))
                  << (out.existence_certified ? " certified" : " not certified") << "\n";
        pass = pass && ok;
    }
    {
        const SystemEvaluator ev(parse_system("vars: x\ninit: x in [-1,1]\neq: x^2 + 1"));
        const auto whole = contract(ev, Box{Interval::make(-1, 1)});
        const auto left = contract(ev, Box{Interval::make(-1, 0)});
        const auto right = contract(ev, Box{Interval::make(0, 1)});
        const bool ok = whole.kind == ContractionOutcome::Kind::skipped &&
                        left.kind == ContractionOutcome::Kind::empty && right.kind == ContractionOutcome::Kind::empty;
        std::cout << "  x^2+1: whole box " << (whole.kind == ContractionOutcome::Kind::skipped ? "skipped" : "not skipped")
                  << ", halves " << (ok ? "empty" : "not both empty") << "\n";
        pass = pass && ok;
    }
    return verdict(8, pass);
}

// ---------------------------------------------------------------------------

std::string run_tool(const std::string& args, int& status) {
    const std::string cmd = std::string(HSROOT_CLI) + " " + args;
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        status = -1;
        return out;
    }
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int raw = pclose(pipe);
    status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return out;
}

// The "roots" member as it appears in the document text.
std::string roots_section(const std::string& doc) {
    const auto key = doc.find("\"roots\":");
    if (key == std::string::npos) return {};
    const auto open = doc.find('[', key);
    int depth = 0;
    for (std::size_t i = open; i < doc.size(); ++i) {
        if (doc[i] == '[') ++depth;
        if (doc[i] == ']' && --depth == 0) return doc.substr(key, i + 1 - key);
    }
    return {};
}

bool criterion_9() {
    bool pass = true;
    for (const char* name : {"katsura3", "noon3"}) {
        const std::string file = std::string(HSROOT_CORPUS_DIR) + "/" + name + ".sys";
        int s1 = 0, s8 = 0;
        const auto one = roots_section(run_tool("solve " + file + " --format json --threads 1", s1));
        const auto eight = roots_section(run_tool("solve " + file + " --format json --threads 8", s8));
        const bool ok = s1 == 0 && s8 == 0 && !one.empty() && one == eight;
        std::cout << "  " << name << ": roots section " << one.size() << " bytes, "
                  << (ok ? "identical" : "DIFFERENT") << "\n";
        pass = pass && ok;
    }
    return verdict(9, pass);
}

// ---------------------------------------------------------------------------

bool criterion_10() {
    std::mt19937_64 rng(1010);
    std::vector<std::pair<PolySystem, std::vector<oracle::Vec>>> pool;
    for (const auto& e : small_systems) {
        if (!in_corpus(e.name)) continue;
        auto s = testing_support::load_system(e.name);
        auto roots = oracle::sample_roots(s, 3000, 77);
        if (!roots.empty()) pool.emplace_back(std::move(s), std::move(roots));
    }
    int boxes = 0, hs_lost = 0, k_lost = 0, ratios = 0, singular = 0;
    double ratio_sum = 0;
    std::uniform_int_distribution<int> depth(1, 16);
    std::uniform_real_distribution<double> frac(0.02, 0.98);
    while (boxes < 1000) {
        const auto& [s, roots] = pool[boxes % pool.size()];
        const SystemEvaluator ev(s);
        const auto& centre = roots[std::uniform_int_distribution<std::size_t>(0, roots.size() - 1)(rng)];
        std::vector<Interval> iv;
        for (std::size_t j = 0; j < s.dimension(); ++j) {
            const auto& outer = s.initial_box[j];
            const double w = std::ldexp(outer.hi() - outer.lo(), -depth(rng));
            const double a = frac(rng);
            const double c = static_cast<double>(centre[j]);
            iv.push_back(Interval::make(std::max(outer.lo(), c - a * w), std::min(outer.hi(), c + (1 - a) * w)));
        }
        const Box b(std::move(iv));
        if (!inside(b, centre)) continue;
        ++boxes;

        const auto hs = contract(ev, b);
        const auto k = krawczyk(ev, b);
        const bool linearisable = detail::linearise(ev, b).has_value();
        singular += !linearisable;
        for (const auto& root : roots) {
            if (!inside(b, root)) continue;
            const long double slack = 1e-12L;
            bool in_hs = false;
            for (const auto& c : hs.boxes) in_hs = in_hs || inside(c, root, slack);
            hs_lost += !in_hs;
            if (linearisable) k_lost += !(k && inside(*k, root, slack));
        }
        if (hs.kind == ContractionOutcome::Kind::boxes && k) {
            double hs_width = 0;
            for (const auto& c : hs.boxes) hs_width = std::max(hs_width, c.max_width());
            const double k_width = k->max_width();
            if (k_width > 0) {
                ratio_sum += hs_width / k_width;
                ++ratios;
            }
        }
    }
    std::cout << "  " << boxes << " boxes over " << pool.size() << " systems, " << singular
              << " with singular midpoint Jacobian\n";
    std::cout << "  roots lost: Hansen-Sengupta " << hs_lost << ", Krawczyk " << k_lost << "\n";
    std::cout << "  mean width ratio HS/Krawczyk " << (ratios ? ratio_sum / ratios : 0) << " over " << ratios
              << " boxes\n";
    return verdict(10, hs_lost == 0 && k_lost == 0);
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<bool()>> criteria = {criterion_1, criterion_2, criterion_3, criterion_4,
                                                         criterion_5, criterion_6, criterion_7, criterion_8,
                                                         criterion_9, criterion_10};
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::cerr << "usage: acceptance [--criterion N]\n";
            return 2;
        }
    }
    if (only < 0 || only > static_cast<int>(criteria.size())) {
        std::cerr << "acceptance: no criterion " << only << "\n";
        return 2;
    }
    bool all = true;
    for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) {
        if (only != 0 && n != only) continue;
        all = criteria[n - 1]() && all;
    }
    return all ? 0 : 1;
}
