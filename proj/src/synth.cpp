#include "copulacpd/synth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

namespace copulacpd {
namespace {

// Generation context. Row i (0-based) is time t = i + 1; it belongs to the post-change
// segment when t > tau, i.e. i >= tau. Each component draws from its own named stream.
struct Ctx {
    std::size_t n;
    std::size_t tau;
    bool twin;
    std::uint64_t seed;
    const std::map<std::string, double>& params;

    bool post(std::size_t i) const { return !twin && i >= tau; }
    double par(const std::string& key) const { return params.at(key); }
    std::size_t count(const std::string& key) const { return static_cast<std::size_t>(std::llround(par(key))); }
    CounterRng rng(const char* stream) const { return CounterRng(seed, stream_tag(stream)); }

    std::vector<double> normals(const char* stream, std::size_t count, double sd = 1.0) const {
        CounterRng r = rng(stream);
        std::vector<double> out(count);
        for (auto& v : out) v = sd * r.normal();
        return out;
    }
};

struct Draw {
    std::vector<double> x;
    std::vector<double> y;
    Matrix z;
    Matrix all_x;  // n x m for multi-driver scenarios, empty otherwise
    std::size_t driver = 0;
};

using Generator = std::function<Draw(const Ctx&)>;

Matrix column(const std::vector<double>& v) { return Matrix(v.size(), 1, v); }

double logistic(double v) { return 1.0 / (1.0 + std::exp(-v)); }

// Linear-interpolated empirical quantile (sorted-order statistic at position (N - 1) q).
double quantile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

// Z ~ N(0,1), X = Z + eps_x, eps_y ~ N(0, sigma_y^2).
struct Default {
    std::vector<double> z, x, ey;
};

Default default_design(const Ctx& c) {
    Default d;
    d.z = c.normals("z", c.n);
    const auto ex = c.normals("eps_x", c.n, c.par("sigma_x"));
    d.ey = c.normals("eps_y", c.n, c.par("sigma_y"));
    d.x.resize(c.n);
    for (std::size_t i = 0; i < c.n; ++i) d.x[i] = d.z[i] + ex[i];
    return d;
}

// Linear response with a per-segment driver coefficient: Y = 0.5 Z + coef X + eps_y.
Draw linear_coef_switch(const Ctx& c, double pre_coef, double post_coef) {
    auto d = default_design(c);
    Draw out;
    out.y.resize(c.n);
    for (std::size_t i = 0; i < c.n; ++i) {
        const double coef = c.post(i) ? post_coef : pre_coef;
        out.y[i] = 0.5 * d.z[i] + coef * d.x[i] + d.ey[i];
    }
    out.x = std::move(d.x);
    out.z = column(d.z);
    return out;
}

// Multi-dimensional confounder: X = Z'gamma + eps_x, g(Z) = Z'beta over the first `signal` dims.
Draw multiz_strength(const Ctx& c, std::size_t dims, std::size_t signal, double gamma, double beta) {
    const auto zv = c.normals("z", c.n * dims);
    const auto ex = c.normals("eps_x", c.n, c.par("sigma_x"));
    const auto ey = c.normals("eps_y", c.n, c.par("sigma_y"));
    Draw out;
    out.x.resize(c.n);
    out.y.resize(c.n);
    for (std::size_t i = 0; i < c.n; ++i) {
        double xz = 0.0;
        double g = 0.0;
        for (std::size_t j = 0; j < signal; ++j) {
            xz += gamma * zv[i * dims + j];
            g += beta * zv[i * dims + j];
        }
        out.x[i] = xz + ex[i];
        out.y[i] = g + (c.post(i) ? 0.9 : 0.3) * out.x[i] + ey[i];
    }
    out.z = Matrix(c.n, dims, zv);
    return out;
}

// m correlated drivers X(j) = load_f F + load_z Z + eps_x,j (F omitted when load_f == 0).
Matrix correlated_drivers(const Ctx& c, const std::vector<double>& z, std::size_t m, double load_f, double load_z) {
    const auto f = load_f != 0.0 ? c.normals("factor", c.n) : std::vector<double>(c.n, 0.0);
    const auto ex = c.normals("eps_x", c.n * m, c.par("sigma_x"));
    Matrix xs(c.n, m);
    for (std::size_t i = 0; i < c.n; ++i) {
        for (std::size_t j = 0; j < m; ++j) xs(i, j) = load_f * f[i] + load_z * z[i] + ex[i * m + j];
    }
    return xs;
}

Draw from_drivers(Matrix xs, std::size_t driver, std::vector<double> y, const std::vector<double>& z) {
    Draw out;
    out.x.resize(xs.rows());
    for (std::size_t i = 0; i < xs.rows(); ++i) out.x[i] = xs(i, driver);
    out.y = std::move(y);
    out.z = column(z);
    out.all_x = std::move(xs);
    out.driver = driver;
    return out;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw Error(ErrorCode::BadParams, message);
}

std::size_t driver_count(const Ctx& c) {
    const std::size_t m = c.count("m");
    require(m >= 2, "m must be >= 2");
    return m;
}

struct Entry {
    ScenarioInfo info;
    Generator generate;
};

const std::map<std::string, double> kNoise = {{"sigma_x", 0.10}, {"sigma_y", 0.10}};

std::map<std::string, double> with_noise(std::map<std::string, double> extra) {
    extra.insert(kNoise.begin(), kNoise.end());
    return extra;
}

std::vector<Entry> build_registry() {
    std::vector<Entry> r;
    auto add = [&r](std::string id, std::string summary, std::map<std::string, double> extra,
                    std::vector<std::string> assumed, Generator g) {
        const bool is_null = !id.empty() && id[0] == 'N';
        r.push_back(Entry{ScenarioInfo{std::move(id), is_null, std::move(summary), with_noise(std::move(extra)),
                                       std::move(assumed)},
                          std::move(g)});
    };

    // ---- Positive controls -------------------------------------------------------------
    add("PMB01_EDGE_ON_LINEAR", "edge appears: pre Y<-Z, post Y<-X+Z", {}, {}, [](const Ctx& c) {
        auto d = default_design(c);
        Draw out;
        out.y.resize(c.n);
        for (std::size_t i = 0; i < c.n; ++i) out.y[i] = (c.post(i) ? d.x[i] : 0.0) + d.z[i] + d.ey[i];
        out.x = d.x;
        out.z = column(d.z);
        return out;
    });
    add("PMB02_EDGE_ON_NONLIN", "nonlinear edge appears: sin(Z) baseline, post adds 0.6 tanh(X)", {}, {},
        [](const Ctx& c) {
            auto d = default_design(c);
            Draw out;
            out.y.resize(c.n);
            for (std::size_t i = 0; i < c.n; ++i) {
                out.y[i] = std::sin(d.z[i]) + (c.post(i) ? 0.6 * std::tanh(d.x[i]) : 0.0) + d.ey[i];
            }
            out.x = d.x;
            out.z = column(d.z);
            return out;
        });
    add("PMB03_EDGE_ON_NEWDRV", "new driver X(2) becomes causal post-change", {{"m", 3}}, {"m"}, [](const Ctx& c) {
        const std::size_t m = driver_count(c);
        const auto z = c.normals("z", c.n);
        const auto ey = c.normals("eps_y", c.n, c.par("sigma_y"));
        Matrix xs = correlated_drivers(c, z, m, 0.0, 1.0);
        std::vector<double> y(c.n);
        for (std::size_t i = 0; i < c.n; ++i) {
            y[i] = 0.6 * xs(i, 0) + (c.post(i) ? 0.6 * xs(i, 1) : 0.0) + 0.5 * z[i] + ey[i];
        }
        return from_drivers(std::move(xs), 1, std::move(y), z);
    });
    add("PMB04_EDGE_OFF", "edge removed: pre sin(Z)+0.6 tanh(X), post sin(Z)", {}, {}, [](const Ctx& c) {
        auto d = default_design(c);
        Draw out;
        out.y.resize(c.n);
        for (std::size_t i = 0; i < c.n; ++i) {
            out.y[i] = std::sin(d.z[i]) + (c.post(i) ? 0.0 : 0.6 * std::tanh(d.x[i])) + d.ey[i];
        }
        out.x = d.x;
        out.z = column(d.z);
        return out;
    });
    add("PMB05_EDGE_ON_COLLINEAR_X", "edge on for X(1) among strongly collinear drivers",
        {{"m", 3}, {"rho_f", 0.8}, {"rho_z", 0.6}}, {"m", "rho_f", "rho_z"}, [](const Ctx& c) {
            const std::size_t m = driver_count(c);
            require(c.par("rho_f") > 0 && c.par("rho_z") > 0, "rho_f and rho_z must be positive");
            const auto z = c.normals("z", c.n);
            const auto ey = c.normals("eps_y", c.n, c.par("sigma_y"));
            Matrix xs = correlated_drivers(c, z, m, c.par("rho_f"), c.par("rho_z"));
            std::vector<double> y(c.n);
            for (std::size_t i = 0; i < c.n; ++i) y[i] = 0.5 * z[i] + (c.post(i) ? 0.6 * xs(i, 0) : 0.0) + ey[i];
            return from_drivers(std::move(xs), 0, std::move(y), z);
        });

    add("PEF01_SIGN_FLIP", "sign flip: +0.6 X pre, -0.6 X post", {}, {},
        [](const Ctx& c) { return linear_coef_switch(c, 0.6, -0.6); });
    add("PEF02_STRENGTH_SHIFT", "strength shift 0.3 -> 0.9", {}, {},
        [](const Ctx& c) { return linear_coef_switch(c, 0.3, 0.9); });
    add("PEF03_STRENGTH_SHIFT_MULTIZ", "strength shift with d_z-dim Z, coefficients scaled by 1/sqrt(d_z)",
        {{"d_z", 3}}, {"d_z"}, [](const Ctx& c) {
            const std::size_t dz = c.count("d_z");
            require(dz >= 1, "d_z must be >= 1");
            const double s = std::sqrt(static_cast<double>(dz));
            return multiz_strength(c, dz, dz, 0.5 / s, 0.4 / s);
        });
    add("PEF04_STRENGTH_SHIFT_DISTRACTORS", "strength shift; only d_s of d_s+d_n Z dims confound",
        {{"d_s", 2}, {"d_n", 2}}, {"d_s", "d_n"}, [](const Ctx& c) {
            const std::size_t ds = c.count("d_s");
            const std::size_t dn = c.count("d_n");
            require(ds >= 1, "d_s must be >= 1");
            const double s = std::sqrt(static_cast<double>(ds));
            return multiz_strength(c, ds + dn, ds, 0.5 / s, 0.4 / s);
        });
    add("PEF05_STRENGTH_SHIFT_MULTIZ_NOSCALE", "strength shift with d_z-dim Z, unscaled coefficients", {{"d_z", 3}},
        {"d_z"}, [](const Ctx& c) {
            const std::size_t dz = c.count("d_z");
            require(dz >= 1, "d_z must be >= 1");
            return multiz_strength(c, dz, dz, 0.5, 0.4);
        });
    add("PEF06_SIGN_FLIP_GAUSS", "sign flip in a jointly Gaussian design", {}, {},
        [](const Ctx& c) { return linear_coef_switch(c, 0.6, -0.6); });
    add("PEF07_SPARSE_CHANGE_CORR_X", "active driver switches between correlated X columns",
        {{"m", 3}, {"j_pre", 1}, {"j_post", 2}}, {"m"}, [](const Ctx& c) {
            const std::size_t m = driver_count(c);
            const std::size_t jpre = c.count("j_pre");
            const std::size_t jpost = c.count("j_post");
            require(jpre >= 1 && jpre <= m && jpost >= 1 && jpost <= m && jpre != jpost,
                    "j_pre and j_post must be distinct columns in 1..m");
            const auto z = c.normals("z", c.n);
            const auto ey = c.normals("eps_y", c.n, c.par("sigma_y"));
            Matrix xs = correlated_drivers(c, z, m, 0.8, 0.6);
            std::vector<double> y(c.n);
            for (std::size_t i = 0; i < c.n; ++i) {
                const std::size_t j = (c.post(i) ? jpost : jpre) - 1;
                y[i] = 0.5 * z[i] + 0.6 * xs(i, j) + ey[i];
            }
            return from_drivers(std::move(xs), 0, std::move(y), z);
        });
    add("PEF08_POISSON_SLOPE", "Poisson slope Y = Z X + eps, rate 0.5 -> 5, Z the Poisson draw",
        {{"lambda_pre", 0.5}, {"lambda_post", 5.0}}, {}, [](const Ctx& c) {
            require(c.par("lambda_pre") > 0 && c.par("lambda_post") > 0, "Poisson rates must be positive");
            CounterRng zr = c.rng("z");
            const auto x = c.normals("x", c.n);
            const auto ey = c.normals("eps_y", c.n, c.par("sigma_y"));
            Draw out;
            std::vector<double> z(c.n);
            out.y.resize(c.n);
            for (std::size_t i = 0; i < c.n; ++i) {
                z[i] = static_cast<double>(zr.poisson(c.post(i) ? c.par("lambda_post") : c.par("lambda_pre")));
                out.y[i] = z[i] * x[i] + ey[i];
            }
            out.x = x;
            out.z = column(z);
            return out;
        });

    add("PNL01_SHAPE_CHANGE", "driver link tanh(1.5X) -> cos(2X)", {}, {}, [](const Ctx& c) {
        auto d = default_design(c);
        Draw out;
        out.y.resize(c.n);
        for (std::size_t i = 0; i < c.n; ++i) {
            const double link = c.post(i) ? std::cos(2.0 * d.x[i]) : std::tanh(1.5 * d.x[i]);
            out.y[i] = 0.5 * d.z[i] + link + d.ey[i];
        }
        out.x = d.x;
        out.z = column(d.z);
        return out;
    });
    add("PNL02_INTERACTION_EDGE_ON_XZ", "post adds 0.6 X tanh(Z)", {}, {}, [](const Ctx& c) {
        auto d = default_design(c);
        Draw out;
        out.y.resize(c.n);
        for (std::size_t i = 0; i < c.n; ++i) {
            out.y[i] = 0.5 * d.z[i] + 0.6 * d.x[i] + (c.post(i) ? 0.6 * d.x[i] * std::tanh(d.z[i]) : 0.0) + d.ey[i];
        }
        out.x = d.x;
        out.z = column(d.z);
        return out;
    });
    add("PNL03_TAIL_GATED_EDGE_ON", "post coupling gated on large |X|", {{"q", 0.6}, {"sharpness", 10.0}}, {},
        [](const Ctx& c) {
            require(c.par("q") >= 0 && c.par("q") <= 1, "q must lie in [0, 1]");
            auto d = default_design(c);
            std::vector<double> post_abs;
            for (std::size_t i = c.tau; i < c.n; ++i) post_abs.push_back(std::fabs(d.x[i]));
            const double theta = quantile(post_abs, c.par("q"));
            Draw out;
            out.y.resize(c.n);
            for (std::size_t i = 0; i < c.n; ++i) {
                double effect = 0.0;
                if (c.post(i)) {
                    const double gate = logistic(c.par("sharpness") * (std::fabs(d.x[i]) - theta));
                    effect = 0.6 * gate * d.x[i];
                }
                out.y[i] = 0.5 * d.z[i] + effect + d.ey[i];
            }
            out.x = d.x;
            out.z = column(d.z);
            return out;
        });
    add("PNL04_QUADRATIC_FLIP", "3 X^2 -> -3 X^2 with f_Z(Z) = fz_coef Z",
        {{"beta", 3.0}, {"fz_coef", 0.5}}, {"fz_coef"}, [](const Ctx& c) {
            auto d = default_design(c);
            Draw out;
            out.y.resize(c.n);
            for (std::size_t i = 0; i < c.n; ++i) {
                const double beta = c.post(i) ? -c.par("beta") : c.par("beta");
                out.y[i] = beta * d.x[i] * d.x[i] + c.par("fz_coef") * d.z[i] + d.ey[i];
            }
            out.x = d.x;
            out.z = column(d.z);
            return out;
        });
    add("PNL05_HIGH_FREQ_SINE", "sin(8 pi X) dependence disappears", {{"fz_coef", 0.5}}, {"fz_coef"},
        [](const Ctx& c) {
            auto d = default_design(c);
            Draw out;
            out.y.resize(c.n);
            for (std::size_t i = 0; i < c.n; ++i) {
                const double wave = c.post(i) ? 0.0 : std::sin(8.0 * std::numbers::pi * d.x[i]);
                out.y[i] = wave + c.par("fz_coef") * d.z[i] + d.ey[i];
            }
            out.x = d.x;
            out.z = column(d.z);
            return out;
        });

    add("PNM01_COND_SKEW", "post noise: standardized lognormal with shape 0.1 + 2|X|; Y = eps", {}, {},
        [](const Ctx& c) {
            auto d = default_design(c);
            CounterRng aux = c.rng("aux");
            const double s0 = c.par("sigma_y");
            Draw out;
            out.y.resize(c.n);
            for (std::size_t i = 0; i < c.n; ++i) {
                const double shape = 0.1 + 2.0 * std::fabs(d.x[i]);
                const double noise = standardized_lognormal(shape, s0, aux);
                out.y[i] = c.post(i) ? noise : d.ey[i];
            }
            out.x = d.x;
            out.z = column(d.z);
            return out;
        });
    add("PNM02_COND_TAILS", "post noise: symmetric lognormal with shape 0.1 + 2|X|; Y = eps", {}, {},
        [](const Ctx& c) {
            auto d = default_design(c);
            CounterRng aux = c.rng("aux");
            CounterRng sign = c.rng("sign");
            const double s0 = c.par("sigma_y");
            Draw out;
            out.y.resize(c.n);
            for (std::size_t i = 0; i < c.n; ++i) {
                const double shape = 0.1 + 2.0 * std::fabs(d.x[i]);
                const double g = aux.normal();
                const double s = sign.rademacher();
                // exp(shape g) / sqrt(exp(2 shape^2)), folded into one exponent
                const double noise = s0 * s * std::exp(shape * g - shape * shape);
                out.y[i] = c.post(i) ? noise : d.ey[i];
            }
            out.x = d.x;
            out.z = column(d.z);
            return out;
        });
    add("PNM03_COND_MIXTURE", "post noise: X-weighted two-component mixture, globally standardized; Y = eps",
        {{"slope", 5.0}}, {}, [](const Ctx& c) {
            auto d = default_design(c);
            CounterRng pick = c.rng("mixture_pick");
            CounterRng comp = c.rng("aux");
            const double s0 = c.par("sigma_y");
            Draw out;
            out.y = d.ey;
            std::vector<std::size_t> post_rows;
            std::vector<double> u;
            for (std::size_t i = 0; i < c.n; ++i) {
                const double w = logistic(c.par("slope") * d.x[i]);
                const bool left = pick.uniform() < w;
                const double g = comp.normal();
                if (!c.post(i)) continue;
                post_rows.push_back(i);
                u.push_back(left ? -3.0 + 0.5 * g : 3.0 + 0.5 * g);
            }
            if (u.size() >= 2) {
                const double mean = std::accumulate(u.begin(), u.end(), 0.0) / static_cast<double>(u.size());
                double ss = 0.0;
                for (double v : u) ss += (v - mean) * (v - mean);
                const double sd = std::sqrt(ss / static_cast<double>(u.size() - 1));
                for (std::size_t j = 0; j < u.size(); ++j) out.y[post_rows[j]] = s0 * (u[j] - mean) / sd;
            }
            out.x = d.x;
            out.z = column(d.z);
            return out;
        });

    add("PVR01_COND_HETSKED", "post noise variance sigma0^2 ((1 - theta) + theta X^2)", {{"theta", 0.99}}, {},
        [](const Ctx& c) {
            require(c.par("theta") >= 0 && c.par("theta") <= 1, "theta must lie in [0, 1]");
            auto d = default_design(c);
            const auto xi = c.normals("aux", c.n);
            const double s0 = c.par("sigma_y");
            const double theta = c.par("theta");
            Draw out;
            out.y.resize(c.n);
            for (std::size_t i = 0; i < c.n; ++i) {
                const double eps = c.post(i) ? s0 * xi[i] * std::sqrt((1.0 - theta) + theta * d.x[i] * d.x[i]) : d.ey[i];
                out.y[i] = 0.5 * d.z[i] + 0.6 * d.x[i] + eps;
            }
            out.x = d.x;
            out.z = column(d.z);
            return out;
        });
    add("PVR02_VOL_CLUSTER", "post residuals follow ARCH(1): sigma_t^2 = 0.2 + 0.6 eps_{t-1}^2",
        {{"arch_omega", 0.2}, {"arch_alpha", 0.6}}, {}, [](const Ctx& c) {
            auto d = default_design(c);
            const auto xi = c.normals("aux", c.n);
            Draw out;
            out.y.resize(c.n);
            double prev = 0.0;
            for (std::size_t i = 0; i < c.n; ++i) {
                double eps = 0.10 * xi[i];
                if (c.post(i)) eps = std::sqrt(c.par("arch_omega") + c.par("arch_alpha") * prev * prev) * xi[i];
                prev = eps;
                out.y[i] = 0.5 * d.z[i] + 0.6 * d.x[i] + eps;
            }
            out.x = d.x;
            out.z = column(d.z);
            return out;
        });
    add("PVR03_GLOBAL_NOISE_SCALE", "noise sd 0.10 -> 0.50", {{"sd_pre", 0.10}, {"sd_post", 0.50}}, {},
        [](const Ctx& c) {
            auto d = default_design(c);
            const auto xi = c.normals("aux", c.n);
            Draw out;
            out.y.resize(c.n);
            for (std::size_t i = 0; i < c.n; ++i) {
                const double sd = c.post(i) ? c.par("sd_post") : c.par("sd_pre");
                out.y[i] = 0.5 * d.z[i] + 0.6 * d.x[i] + sd * xi[i];
            }
            out.x = d.x;
            out.z = column(d.z);
            return out;
        });

    add("PSM01_SMOOTH_TRANSITION", "0.6 tanh(X) effect mixed in by a logistic ramp of width W around tau",
        {{"width", 100}}, {"width"}, [](const Ctx& c) {
            require(c.par("width") >= 1, "width must be >= 1");
            auto d = default_design(c);
            Draw out;
            out.y.resize(c.n);
            for (std::size_t i = 0; i < c.n; ++i) {
                const double w = c.twin ? 0.0
                                        : logistic_ramp(static_cast<double>(i + 1), static_cast<double>(c.tau),
                                                        c.par("width"));
                out.y[i] = std::sin(d.z[i]) + w * 0.6 * std::tanh(d.x[i]) + d.ey[i];
            }
            out.x = d.x;
            out.z = column(d.z);
            return out;
        });

    // ---- Negative controls -------------------------------------------------------------
    add("NCL01_BASE_NULL", "stationary Y = 0.5 Z + eps, X generated but unused", {}, {}, [](const Ctx& c) {
        auto d = default_design(c);
        Draw out;
        out.y.resize(c.n);
        for (std::size_t i = 0; i < c.n; ++i) out.y[i] = 0.5 * d.z[i] + d.ey[i];
        out.x = d.x;
        out.z = column(d.z);
        return out;
    });
    add("NCL02_MULTIX_ALIGN", "PMB03 world without the change", {{"m", 3}}, {"m"}, [](const Ctx& c) {
        const std::size_t m = driver_count(c);
        const auto z = c.normals("z", c.n);
        const auto ey = c.normals("eps_y", c.n, c.par("sigma_y"));
        Matrix xs = correlated_drivers(c, z, m, 0.0, 1.0);
        std::vector<double> y(c.n);
        for (std::size_t i = 0; i < c.n; ++i) y[i] = 0.6 * xs(i, 0) + 0.5 * z[i] + ey[i];
        return from_drivers(std::move(xs), 1, std::move(y), z);
    });

    // Default stationary mechanism shared by the invariance checks.
    auto stationary = [](const Ctx& c) {
        auto d = default_design(c);
        Draw out;
        out.y.resize(c.n);
        for (std::size_t i = 0; i < c.n; ++i) out.y[i] = 0.5 * d.z[i] + 0.6 * d.x[i] + d.ey[i];
        out.x = d.x;
        out.z = column(d.z);
        return out;
    };
    add("NIV01_GLOBAL_RESCALE", "post (X, Y, Z) multiplied by lambda = 10", {{"lambda", 10.0}}, {},
        [stationary](const Ctx& c) {
            require(c.par("lambda") > 0, "lambda must be positive");
            Draw out = stationary(c);
            for (std::size_t i = 0; i < c.n; ++i) {
                if (!c.post(i)) continue;
                out.x[i] *= c.par("lambda");
                out.y[i] *= c.par("lambda");
                out.z(i, 0) *= c.par("lambda");
            }
            return out;
        });
    add("NIV02_Y_MONO_TRANSFORM", "post Y <- asinh(Y)", {}, {}, [stationary](const Ctx& c) {
        Draw out = stationary(c);
        for (std::size_t i = 0; i < c.n; ++i) {
            if (c.post(i)) out.y[i] = std::asinh(out.y[i]);
        }
        return out;
    });
    add("NIV03_X_MONO_GIVEN_Z", "post X <- (1 + logistic(Z)) cbrt(X) + Z^2", {}, {}, [stationary](const Ctx& c) {
        Draw out = stationary(c);
        for (std::size_t i = 0; i < c.n; ++i) {
            if (!c.post(i)) continue;
            const double z = out.z(i, 0);
            out.x[i] = (1.0 + logistic(z)) * std::cbrt(out.x[i]) + z * z;
        }
        return out;
    });

    add("NMD01_Z_LOC_SCALE", "post Z ~ N(0.5, 1.6^2), structure unchanged", {{"z_shift", 0.5}, {"z_scale", 1.6}}, {},
        [](const Ctx& c) {
            auto d = default_design(c);
            const auto ex = c.normals("eps_x", c.n, c.par("sigma_x"));
            Draw out;
            out.x.resize(c.n);
            out.y.resize(c.n);
            std::vector<double> z = d.z;
            for (std::size_t i = 0; i < c.n; ++i) {
                if (c.post(i)) z[i] = c.par("z_shift") + c.par("z_scale") * d.z[i];
                out.x[i] = z[i] + ex[i];
                out.y[i] = 0.5 * z[i] + d.ey[i];
            }
            out.z = column(z);
            return out;
        });
    add("NMD02_X_MEAN_SHIFT", "post X shifted by +2, Y independent of X given Z", {{"x_shift", 2.0}}, {},
        [](const Ctx& c) {
            auto d = default_design(c);
            Draw out;
            out.y.resize(c.n);
            out.x = d.x;
            for (std::size_t i = 0; i < c.n; ++i) {
                if (c.post(i)) out.x[i] += c.par("x_shift");
                out.y[i] = 0.5 * d.z[i] + d.ey[i];
            }
            out.z = column(d.z);
            return out;
        });
    add("NMD03_Y_TREND", "Y = 0.5 X + 0.02 t + eps for t = 0..n-1", {{"slope", 0.02}}, {}, [](const Ctx& c) {
        auto d = default_design(c);
        Draw out;
        out.y.resize(c.n);
        for (std::size_t i = 0; i < c.n; ++i) {
            out.y[i] = 0.5 * d.x[i] + c.par("slope") * static_cast<double>(i) + d.ey[i];
        }
        out.x = d.x;
        out.z = column(d.z);
        return out;
    });
    add("NMD04_Y_SEASON", "Y = 0.5 X + 2 sin(2 pi t / 50) + eps", {{"period", 50}, {"amplitude", 2.0}}, {},
        [](const Ctx& c) {
            require(c.par("period") > 0, "period must be positive");
            auto d = default_design(c);
            Draw out;
            out.y.resize(c.n);
            for (std::size_t i = 0; i < c.n; ++i) {
                const double phase = 2.0 * std::numbers::pi * static_cast<double>(i) / c.par("period");
                out.y[i] = 0.5 * d.x[i] + c.par("amplitude") * std::sin(phase) + d.ey[i];
            }
            out.x = d.x;
            out.z = column(d.z);
            return out;
        });

    add("NNS01_NOISE_LAW_SHIFT", "Gaussian -> variance-matched Laplace noise", {}, {}, [](const Ctx& c) {
        auto d = default_design(c);
        CounterRng aux = c.rng("aux");
        const double b = c.par("sigma_y") / std::numbers::sqrt2;
        Draw out;
        out.y.resize(c.n);
        for (std::size_t i = 0; i < c.n; ++i) {
            const double lap = aux.laplace(b);
            out.y[i] = 0.5 * d.z[i] + (c.post(i) ? lap : d.ey[i]);
        }
        out.x = d.x;
        out.z = column(d.z);
        return out;
    });
    add("NNS02_TAILS_SHIFT", "Gaussian -> variance-matched Student-t(3) noise, Y = 0.5 X + eps", {}, {},
        [](const Ctx& c) {
            auto d = default_design(c);
            CounterRng aux = c.rng("aux");
            const double scale = c.par("sigma_y") * std::sqrt(1.0 / 3.0);
            Draw out;
            out.y.resize(c.n);
            for (std::size_t i = 0; i < c.n; ++i) {
                const double t3 = aux.student_t(3);
                out.y[i] = 0.5 * d.x[i] + (c.post(i) ? scale * t3 : d.ey[i]);
            }
            out.x = d.x;
            out.z = column(d.z);
            return out;
        });

    add("NCF01_XGZ_DRIFT", "post X <- 5 (sin Z + eps_x) + 10, Y = 0.5 Z + eps", {}, {}, [](const Ctx& c) {
        auto d = default_design(c);
        const auto ex = c.normals("eps_x", c.n, c.par("sigma_x"));
        Draw out;
        out.x.resize(c.n);
        out.y.resize(c.n);
        for (std::size_t i = 0; i < c.n; ++i) {
            const double base = std::sin(d.z[i]) + ex[i];
            out.x[i] = c.post(i) ? 5.0 * base + 10.0 : base;
            out.y[i] = 0.5 * d.z[i] + d.ey[i];
        }
        out.z = column(d.z);
        return out;
    });
    add("NCF02_Z_COV_SHIFT", "equicorrelation of d_z-dim Z shifts rho_pre -> rho_post",
        {{"d_z", 3}, {"rho_pre", 0.2}, {"rho_post", 0.8}}, {"d_z", "rho_pre", "rho_post"}, [](const Ctx& c) {
            const std::size_t dz = c.count("d_z");
            require(dz >= 1, "d_z must be >= 1");
            for (const char* key : {"rho_pre", "rho_post"}) require(c.par(key) >= 0 && c.par(key) < 1, "rho must lie in [0, 1)");
            const auto common = c.normals("z_common", c.n);
            const auto own = c.normals("z", c.n * dz);
            const auto ex = c.normals("eps_x", c.n, c.par("sigma_x"));
            const auto ey = c.normals("eps_y", c.n, c.par("sigma_y"));
            const double root_d = std::sqrt(static_cast<double>(dz));
            Matrix z(c.n, dz);
            Draw out;
            out.x.resize(c.n);
            out.y.resize(c.n);
            for (std::size_t i = 0; i < c.n; ++i) {
                const double rho = c.post(i) ? c.par("rho_post") : c.par("rho_pre");
                double total = 0.0;
                for (std::size_t j = 0; j < dz; ++j) {
                    z(i, j) = std::sqrt(rho) * common[i] + std::sqrt(1.0 - rho) * own[i * dz + j];
                    total += z(i, j);
                }
                out.x[i] = total / root_d + ex[i];
                out.y[i] = 0.5 * total / root_d + ey[i];
            }
            out.z = std::move(z);
            return out;
        });
    add("NCF03_XGZ_DRIFT_COPULA", "Gaussian copula of (X, Z) shifts rho 0.2 -> 0.8, X ~ N(0,1) throughout",
        {{"rho_pre", 0.2}, {"rho_post", 0.8}}, {}, [](const Ctx& c) {
            for (const char* key : {"rho_pre", "rho_post"}) require(std::fabs(c.par(key)) <= 1, "rho must lie in [-1, 1]");
            const auto z = c.normals("z", c.n);
            const auto ex = c.normals("eps_x", c.n);  // unit variance by definition of this scenario
            const auto ey = c.normals("eps_y", c.n, c.par("sigma_y"));
            Draw out;
            out.x.resize(c.n);
            out.y.resize(c.n);
            for (std::size_t i = 0; i < c.n; ++i) {
                const double rho = c.post(i) ? c.par("rho_post") : c.par("rho_pre");
                out.x[i] = rho * z[i] + std::sqrt(1.0 - rho * rho) * ex[i];
                out.y[i] = 0.5 * z[i] + ey[i];
            }
            out.z = column(z);
            return out;
        });
    add("NCF04_FZ_DRIFT_ONLY", "f(Z) drifts sin(Z) -> tanh(Z); X unused", {}, {}, [](const Ctx& c) {
        auto d = default_design(c);
        Draw out;
        out.y.resize(c.n);
        for (std::size_t i = 0; i < c.n; ++i) {
            out.y[i] = (c.post(i) ? std::tanh(d.z[i]) : std::sin(d.z[i])) + d.ey[i];
        }
        out.x = d.x;
        out.z = column(d.z);
        return out;
    });
    add("NCF05_DISCRETE_Z", "binary Z with P(Z = 1) drifting p_pre -> p_post", {{"p_pre", 0.3}, {"p_post", 0.7}},
        {"p_pre", "p_post"}, [](const Ctx& c) {
            for (const char* key : {"p_pre", "p_post"}) require(c.par(key) >= 0 && c.par(key) <= 1, "p must lie in [0, 1]");
            CounterRng zr = c.rng("z");
            const auto ex = c.normals("eps_x", c.n, c.par("sigma_x"));
            const auto ey = c.normals("eps_y", c.n, c.par("sigma_y"));
            std::vector<double> z(c.n);
            Draw out;
            out.x.resize(c.n);
            out.y.resize(c.n);
            for (std::size_t i = 0; i < c.n; ++i) {
                z[i] = zr.bernoulli(c.post(i) ? c.par("p_post") : c.par("p_pre")) ? 1.0 : 0.0;
                out.x[i] = z[i] + ex[i];
                out.y[i] = 0.5 * z[i] + ey[i];
            }
            out.z = column(z);
            return out;
        });

    add("NDR01_FEATURE_PERMUTE", "non-driver X columns cyclically permuted post-change; driver in column 0",
        {{"m", 3}}, {"m"}, [](const Ctx& c) {
            const std::size_t m = driver_count(c);
            const auto z = c.normals("z", c.n);
            const auto ey = c.normals("eps_y", c.n, c.par("sigma_y"));
            Matrix xs = correlated_drivers(c, z, m, 0.0, 1.0);
            std::vector<double> y(c.n);
            for (std::size_t i = 0; i < c.n; ++i) y[i] = 0.6 * xs(i, 0) + 0.5 * z[i] + ey[i];
            for (std::size_t i = 0; i < c.n; ++i) {
                if (!c.post(i) || m < 3) continue;
                // pi(j) = j + 1 on the non-driver columns 1..m-1, wrapping around
                std::vector<double> rest(m - 1);
                for (std::size_t j = 1; j < m; ++j) rest[j - 1] = xs(i, j);
                for (std::size_t j = 1; j < m; ++j) xs(i, j) = rest[j % (m - 1)];
            }
            return from_drivers(std::move(xs), 0, std::move(y), z);
        });

    add("NPO01_LATENT_Z_STABLE", "X, Y driven by observed and hidden Z; only Z_obs is returned", {}, {},
        [](const Ctx& c) {
            const auto zobs = c.normals("z", c.n);
            const auto zhid = c.normals("z_hidden", c.n);
            const auto ex = c.normals("eps_x", c.n, c.par("sigma_x"));
            const auto ey = c.normals("eps_y", c.n, c.par("sigma_y"));
            Draw out;
            out.x.resize(c.n);
            out.y.resize(c.n);
            for (std::size_t i = 0; i < c.n; ++i) {
                out.x[i] = zobs[i] + zhid[i] + ex[i];
                out.y[i] = 0.5 * zobs[i] + 0.5 * zhid[i] + ey[i];
            }
            out.z = column(zobs);
            return out;
        });
    return r;
}

const std::vector<Entry>& registry() {
    static const std::vector<Entry> entries = build_registry();
    return entries;
}

}  // namespace

const std::vector<ScenarioInfo>& list_scenarios() {
    static const std::vector<ScenarioInfo> infos = [] {
        std::vector<ScenarioInfo> out;
        for (const auto& e : registry()) out.push_back(e.info);
        return out;
    }();
    return infos;
}

const ScenarioInfo& find_scenario(const std::string& id) {
    for (const auto& e : registry()) {
        if (e.info.id == id) return e.info;
    }
    throw Error(ErrorCode::UnknownScenario, "no scenario named '" + id + "'");
}

ScenarioOutput generate(const ScenarioSpec& spec) {
    const Entry* entry = nullptr;
    for (const auto& e : registry()) {
        if (e.info.id == spec.id) entry = &e;
    }
    if (entry == nullptr) throw Error(ErrorCode::UnknownScenario, "no scenario named '" + spec.id + "'");
    require(spec.n >= kMinRows, "n must be >= " + std::to_string(kMinRows));
    require(spec.tau >= 1 && spec.tau < spec.n, "tau must satisfy 1 <= tau < n");

    std::map<std::string, double> params = entry->info.defaults;
    for (const auto& [key, value] : spec.params) {
        auto it = params.find(key);
        require(it != params.end(), "scenario " + spec.id + " has no parameter '" + key + "'");
        require(std::isfinite(value), "parameter '" + key + "' must be finite");
        it->second = value;
    }
    require(params.at("sigma_x") >= 0 && params.at("sigma_y") >= 0, "noise scales must be non-negative");

    const Ctx ctx{spec.n, spec.tau, spec.twin, spec.seed, params};
    Draw draw = entry->generate(ctx);

    ScenarioOutput out;
    out.data.x = std::move(draw.x);
    out.data.y = std::move(draw.y);
    out.data.z = std::move(draw.z);
    out.is_null = entry->info.is_null;
    out.driver_column = draw.driver;
    out.true_tau = spec.tau;
    if (draw.all_x.cols() > 1) {
        const std::size_t m = draw.all_x.cols();
        out.other_x = Matrix(spec.n, m - 1);
        for (std::size_t i = 0; i < spec.n; ++i) {
            std::size_t col = 0;
            for (std::size_t j = 0; j < m; ++j) {
                if (j != draw.driver) out.other_x(i, col++) = draw.all_x(i, j);
            }
        }
    }
    out.params = std::move(params);
    out.assumed_params = entry->info.assumed_params;
    validate(out.data);
    return out;
}

double standardized_lognormal(double shape, double sigma0, CounterRng& rng) {
    const double s2 = shape * shape;
    const double mean = std::exp(0.5 * s2);
    const double var = std::expm1(s2) * std::exp(s2);
    const double draw = std::exp(shape * rng.normal());
    return sigma0 * (draw - mean) / std::sqrt(var);
}

double logistic_ramp(double t, double tau, double width) {
    const double kappa = std::max(width / 6.0, 1.0);
    return 1.0 / (1.0 + std::exp(-(t - tau) / kappa));
}

}  // namespace copulacpd
