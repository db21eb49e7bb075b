#include "jointseg/config_io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "jointseg/dataset_io.hpp"
#include "jointseg/errors.hpp"

namespace jointseg {

namespace pt = boost::property_tree;

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string strip(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, ',')) {
        item = strip(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

// Typed access to one section, rejecting keys nobody asked for.
class Section {
public:
    Section(std::string name, const pt::ptree& tree) : name_(std::move(name)), tree_(tree) {}

    bool has(const std::string& key) const { return tree_.find(key) != tree_.not_found(); }

    std::string text(const std::string& key) {
        used_.insert(key);
        const auto value = tree_.get_optional<std::string>(key);
        if (!value) throw InputError("[" + name_ + "] is missing required key '" + key + "'");
        return strip(*value);
    }

    double real(const std::string& key) {
        const std::string s = text(key);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) fail(key, s, "a finite number");
        return v;
    }

    std::uint64_t integer(const std::string& key) { return to_integer(key, text(key)); }

    bool boolean(const std::string& key) {
        const std::string s = lower(text(key));
        if (s == "true" || s == "yes" || s == "1") return true;
        if (s == "false" || s == "no" || s == "0") return false;
        fail(key, s, "true or false");
    }

    std::vector<double> reals(const std::string& key) {
        std::vector<double> out;
        for (const auto& item : split_list(text(key))) {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
            if (ec != std::errc() || ptr != item.data() + item.size() || !std::isfinite(v))
                fail(key, item, "a list of finite numbers");
            out.push_back(v);
        }
        return out;
    }

    std::vector<std::uint64_t> integers(const std::string& key) {
        std::vector<std::uint64_t> out;
        for (const auto& item : split_list(text(key))) out.push_back(to_integer(key, item));
        return out;
    }

    void check_unused() const {
        for (const auto& [key, value] : tree_) {
            if (used_.count(key)) continue;
            std::string hint;
            if (key == "sigma2") hint = " (use 'sigma', the noise standard deviation)";
            throw InputError("unknown key '" + key + "' in [" + name_ + "]" + hint);
        }
    }

    [[noreturn]] void fail(const std::string& key, const std::string& value, const std::string& expected) const {
        throw InputError("[" + name_ + "] " + key + " = '" + value + "': expected " + expected);
    }

private:
    std::uint64_t to_integer(const std::string& key, const std::string& s) const {
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) fail(key, s, "a non-negative integer");
        return v;
    }

    std::string name_;
    const pt::ptree& tree_;
    std::set<std::string> used_;
};

BasisSpec parse_basis(Section& s) {
    if (!s.has("kind")) s.fail("kind", "", "one of haar, fourier_fixed, fourier_grid, monomials");
    const std::string kind = lower(s.text("kind"));
    BasisSpec spec;
    if (kind == "haar") {
        HaarBasis b;
        b.resolution = static_cast<int>(s.integer("resolution"));
        b.length = s.real("length");
        spec.kind = b;
    } else if (kind == "fourier_fixed" || kind == "fourier") {
        FourierFixedBasis b;
        b.j_max = static_cast<int>(s.integer("j_max"));
        b.length = s.real("length");
        spec.kind = b;
    } else if (kind == "fourier_grid") {
        spec.kind = FourierGridBasis{s.real("min_period")};
    } else if (kind == "monomials" || kind == "monomial") {
        MonomialBasis b;
        for (auto d : s.integers("degrees")) b.degrees.push_back(static_cast<int>(d));
        spec.kind = b;
    } else {
        s.fail("kind", kind, "one of haar, fourier_fixed, fourier_grid, monomials");
    }
    if (s.has("target")) {
        const std::string t = lower(s.text("target"));
        if (t == "time")
            spec.target = EvalTarget::time;
        else if (t == "covariate")
            spec.target = EvalTarget::covariate;
        else
            s.fail("target", t, "time or covariate");
    }
    s.check_unused();
    try {
        validate(spec);
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("invalid dictionary entry: ") + e.what());
    }
    return spec;
}

template <class F>
void with_section(const pt::ptree& root, const std::string& name, F&& f) {
    const auto it = root.find(name);
    if (it == root.not_found()) return;
    Section s(name, it->second);
    try {
        f(s);
    } catch (const pt::ptree_error& e) {
        throw InputError("[" + name + "]: " + e.what());
    }
    s.check_unused();
}

}  // namespace

std::vector<BasisSpec> dictionary_preset(std::string_view name) {
    if (name == "simulation") return simulation_dictionary(100.0);
    if (name == "gps") return gps_dictionary(8.0);
    throw InputError("unknown dictionary preset '" + std::string(name) + "' (expected simulation or gps)");
}

ToolConfig parse_config(std::istream& in) {
    pt::ptree root;
    try {
        pt::read_ini(in, root);
    } catch (const pt::ini_parser_error& e) {
        throw InputError(e.message(), e.line());
    }

    ToolConfig c;
    std::map<std::uint64_t, BasisSpec> numbered;
    for (const auto& [name, tree] : root) {
        if (name.rfind("dictionary.", 0) == 0) {
            const std::string suffix = name.substr(11);
            std::uint64_t n = 0;
            const auto [ptr, ec] = std::from_chars(suffix.data(), suffix.data() + suffix.size(), n);
            if (ec != std::errc() || ptr != suffix.data() + suffix.size())
                throw InputError("dictionary sections are named [dictionary.N] with an integer N, got [" + name + "]");
            Section s(name, tree);
            numbered[n] = parse_basis(s);
        } else if (name != "dictionary" && name != "fit" && name != "select" && name != "simulate" &&
                   name != "grid") {
            if (tree.empty()) throw InputError("key '" + name + "' outside any section");
            throw InputError("unknown section [" + name + "]");
        }
    }
    for (auto& [n, spec] : numbered) c.dictionary.push_back(std::move(spec));

    with_section(root, "dictionary", [&](Section& s) {
        if (!s.has("preset")) return;
        if (!c.dictionary.empty()) throw InputError("[dictionary] preset cannot be combined with [dictionary.N] sections");
        c.dictionary = dictionary_preset(lower(s.text("preset")));
    });

    with_section(root, "fit", [&](Section& s) {
        if (s.has("K")) c.fit.K_total = s.integer("K");
        if (s.has("gamma")) c.fit.gamma = s.real("gamma");
        if (s.has("epsilon")) c.fit.epsilon = s.real("epsilon");
        if (s.has("max_iterations")) c.fit.max_iterations = s.integer("max_iterations");
        if (s.has("sigma0")) {
            const std::string v = lower(s.text("sigma0"));
            if (v == "robust") {
                c.fit.sigma0_mode = SigmaInit::robust;
            } else {
                c.fit.sigma0_mode = SigmaInit::plugin;
                c.fit.sigma0 = s.real("sigma0");
                if (c.fit.sigma0 < 0) s.fail("sigma0", v, "robust or a number >= 0");
            }
        }
        if (s.has("k_max_per_series")) c.fit.k_max_per_series = s.integer("k_max_per_series");
        if (s.has("lasso_tol")) c.fit.lasso.rel_tol = s.real("lasso_tol");
        if (s.has("lasso_max_sweeps")) c.fit.lasso.max_sweeps = s.integer("lasso_max_sweeps");
    });

    with_section(root, "select", [&](Section& s) {
        if (s.has("kmin")) c.select.K_min = s.integer("kmin");
        if (s.has("kmax")) c.select.K_max = s.integer("kmax");
    });

    with_section(root, "simulate", [&](Section& s) {
        auto& sim = c.simulate;
        if (s.has("n")) sim.n = s.integer("n");
        if (s.has("M")) sim.M = s.integer("M");
        if (s.has("sigma")) sim.sigma = s.real("sigma");
        if (s.has("mean_K")) sim.mean_K = s.real("mean_K");
        if (s.has("jump_values")) sim.jump_values = s.reals("jump_values");
        if (s.has("jump_probs")) sim.jump_probs = s.reals("jump_probs");
        if (s.has("first_segment_zero")) sim.first_segment_zero = s.boolean("first_segment_zero");
        if (s.has("seed")) sim.seed = s.integer("seed");
        if (s.has("replicates")) sim.replicates = s.integer("replicates");
        try {
            validate(sim);
        } catch (const std::invalid_argument& e) {
            throw InputError(std::string("[simulate]: ") + e.what());
        }
    });

    with_section(root, "grid", [&](Section& s) {
        auto& g = c.grid;
        if (s.has("M")) {
            g.M.clear();
            for (auto m : s.integers("M")) g.M.push_back(m);
        }
        if (s.has("sigma")) g.sigma = s.reals("sigma");
        if (s.has("replicates")) g.replicates = s.integer("replicates");
        if (s.has("methods")) {
            g.methods.clear();
            for (const auto& m : split_list(s.text("methods"))) {
                try {
                    g.methods.push_back(method_from_string(m));
                } catch (const std::invalid_argument& e) {
                    throw InputError(std::string("[grid]: ") + e.what());
                }
            }
        }
        if (s.has("seed")) g.seed = s.integer("seed");
        if (s.has("threads")) g.threads = s.integer("threads");
        if (s.has("k_max_sd")) {
            if (lower(s.text("k_max_sd")) == "none")
                g.k_max_sd.reset();
            else
                g.k_max_sd = s.real("k_max_sd");
        }
        if (s.has("k_max_per_series")) {
            if (lower(s.text("k_max_per_series")) == "none")
                g.k_max_per_series.reset();
            else
                g.k_max_per_series = s.integer("k_max_per_series");
        }
        if (g.M.empty() || g.sigma.empty() || g.methods.empty())
            throw InputError("[grid]: M, sigma and methods must not be empty");
    });
    return c;
}

ToolConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config '" + path.string() + "'");
    try {
        return parse_config(in);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

namespace {

template <class T, class F>
std::string join(const std::vector<T>& v, F&& f) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ",") + f(x);
    return s;
}

}  // namespace

std::string to_ini(const ToolConfig& c) {
    std::ostringstream os;
    const auto num = [](double v) { return format_double(v); };
    const auto integer = [](auto v) { return std::to_string(v); };
    for (std::size_t i = 0; i < c.dictionary.size(); ++i) {
        const auto& spec = c.dictionary[i];
        os << "[dictionary." << i + 1 << "]\n";
        std::visit(
            [&](const auto& b) {
                using B = std::decay_t<decltype(b)>;
                if constexpr (std::is_same_v<B, HaarBasis>) {
                    os << "kind = haar\nresolution = " << b.resolution << "\nlength = " << num(b.length) << '\n';
                } else if constexpr (std::is_same_v<B, FourierFixedBasis>) {
                    os << "kind = fourier_fixed\nj_max = " << b.j_max << "\nlength = " << num(b.length) << '\n';
                } else if constexpr (std::is_same_v<B, FourierGridBasis>) {
                    os << "kind = fourier_grid\nmin_period = " << num(b.min_period) << '\n';
                } else {
                    os << "kind = monomials\ndegrees = " << join(b.degrees, integer) << '\n';
                }
            },
            spec.kind);
        os << "target = " << (spec.target == EvalTarget::covariate ? "covariate" : "time") << "\n\n";
    }

    const auto& f = c.fit;
    os << "[fit]\n";
    if (f.K_total) os << "K = " << f.K_total << '\n';
    os << "gamma = " << num(f.gamma) << "\nepsilon = " << num(f.epsilon) << "\nmax_iterations = " << f.max_iterations
       << "\nsigma0 = " << (f.sigma0_mode == SigmaInit::robust ? "robust" : num(f.sigma0)) << '\n';
    if (f.k_max_per_series) os << "k_max_per_series = " << *f.k_max_per_series << '\n';
    os << "lasso_tol = " << num(f.lasso.rel_tol) << "\nlasso_max_sweeps = " << f.lasso.max_sweeps << "\n\n";

    if (c.select.K_min || c.select.K_max) {
        os << "[select]\n";
        if (c.select.K_min) os << "kmin = " << *c.select.K_min << '\n';
        if (c.select.K_max) os << "kmax = " << *c.select.K_max << '\n';
        os << '\n';
    }

    const auto& s = c.simulate;
    os << "[simulate]\nn = " << s.n << "\nM = " << s.M << "\nsigma = " << num(s.sigma) << "\nmean_K = " << num(s.mean_K)
       << "\njump_values = " << join(s.jump_values, num) << "\njump_probs = " << join(s.jump_probs, num)
       << "\nfirst_segment_zero = " << (s.first_segment_zero ? "true" : "false") << "\nseed = " << s.seed
       << "\nreplicates = " << s.replicates << "\n\n";

    const auto& g = c.grid;
    os << "[grid]\nM = " << join(g.M, integer) << "\nsigma = " << join(g.sigma, num)
       << "\nreplicates = " << g.replicates
       << "\nmethods = " << join(g.methods, [](Method m) { return to_string(m); }) << "\nseed = " << g.seed
       << "\nthreads = " << g.threads << "\nk_max_sd = " << (g.k_max_sd ? num(*g.k_max_sd) : "none")
       << "\nk_max_per_series = " << (g.k_max_per_series ? std::to_string(*g.k_max_per_series) : "none") << '\n';
    return os.str();
}

std::vector<SimConfig> expand_grid(const GridConfig& grid, const SimConfig& base) {
    std::vector<SimConfig> cells;
    for (std::size_t M : grid.M)
        for (double sigma : grid.sigma) {
            SimConfig c = base;
            c.M = M;
            c.sigma = sigma;
            c.replicates = grid.replicates;
            c.seed = grid.seed;
            cells.push_back(c);
        }
    return cells;
}

BenchOptions bench_options(const ToolConfig& config) {
    BenchOptions o;
    o.fit = config.fit;
    o.fit.k_max_per_series = config.grid.k_max_per_series;
    o.k_max_sd = config.grid.k_max_sd;
    o.threads = config.grid.threads;
    o.dictionary = config.dictionary.empty() ? simulation_dictionary(static_cast<double>(config.simulate.n))
                                             : config.dictionary;
    return o;
}

}  // namespace jointseg
