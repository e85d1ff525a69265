#include "magicfwht/dynamics.hpp"

#include "magicfwht/errors.hpp"
#include "magicfwht/reduction.hpp"
#include "magicfwht/states.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <utility>

namespace mfwht {

std::string_view to_string(Model m) {
    switch (m) {
    case Model::xxz: return "xxz";
    case Model::tfim_lf: return "tfim_lf";
    case Model::brickwork: return "brickwork";
    }
    throw InternalError("unknown model enum");
}

std::string_view to_string(Boundary b) {
    return b == Boundary::periodic ? "periodic" : "open";
}

std::string_view to_string(InitialKind k) {
    switch (k) {
    case InitialKind::neel: return "neel";
    case InitialKind::random_product: return "random_product";
    case InitialKind::all_up: return "all_up";
    case InitialKind::file: return "file";
    }
    throw InternalError("unknown initial enum");
}

Model model_from_string(std::string_view s) {
    if (s == "xxz") return Model::xxz;
    if (s == "tfim_lf") return Model::tfim_lf;
    if (s == "brickwork") return Model::brickwork;
    throw InvalidInputError("unknown model '" + std::string(s) + "'");
}

Boundary boundary_from_string(std::string_view s) {
    if (s == "periodic") return Boundary::periodic;
    if (s == "open") return Boundary::open;
    throw InvalidInputError("unknown boundary '" + std::string(s) + "'");
}

InitialKind initial_from_string(std::string_view s) {
    if (s == "neel") return InitialKind::neel;
    if (s == "random_product") return InitialKind::random_product;
    if (s == "all_up") return InitialKind::all_up;
    if (s == "file") return InitialKind::file;
    throw InvalidInputError("unknown initial state '" + std::string(s) + "'");
}

void QuenchSpec::validate() const {
    if (n_qubits < 1) throw InvalidInputError("quench: n_qubits must be >= 1");
    if (samples < 1) throw InvalidInputError("quench: samples must be >= 1");
    if (n_steps < 0) throw InvalidInputError("quench: n_steps must be >= 0");
    if (model == Model::brickwork) {
        if (n_qubits % 2 != 0)
            throw InvalidInputError("brickwork: the layer pattern needs an even qubit count");
    } else {
        if (!(dt > 0.0) || !std::isfinite(dt))
            throw InvalidInputError("quench: dt must be positive");
        if (krylov_dim < 2) throw InvalidInputError("quench: krylov_dim must be >= 2");
    }
    if (!std::isfinite(j) || !std::isfinite(delta) || !std::isfinite(hx) || !std::isfinite(hz))
        throw InvalidInputError("quench: couplings must be finite");
    if (initial == InitialKind::file && initial_file.empty())
        throw InvalidInputError("quench: initial == file requires a path");
}

namespace {

// Neighbor bonds (i, i+1); periodic wraps the index. The self-bond that
// would appear at n = 1 is dropped; n = 2 periodic deliberately keeps both
// (0,1) and (1,0), the literal mod-N sum.
std::vector<std::pair<int, int>> bond_list(int n, Boundary boundary) {
    std::vector<std::pair<int, int>> bonds;
    const int last = boundary == Boundary::periodic ? n : n - 1;
    for (int i = 0; i < last; ++i) {
        const int j = (i + 1) % n;
        if (j != i) bonds.emplace_back(i, j);
    }
    return bonds;
}

void apply_hamiltonian_raw(const QuenchSpec& spec, std::span<const cplx> in,
                           std::span<cplx> out) {
    const int n = spec.n_qubits;
    const std::uint64_t d = std::uint64_t{1} << n;
    const auto bonds = bond_list(n, spec.boundary);
    std::vector<std::uint64_t> bond_mask(bonds.size());
    for (std::size_t b = 0; b < bonds.size(); ++b)
        bond_mask[b] = (std::uint64_t{1} << bonds[b].first) | (std::uint64_t{1} << bonds[b].second);

    if (spec.model == Model::xxz) {
        for (std::uint64_t t = 0; t < d; ++t) {
            double zz = 0.0;
            cplx hop{0.0, 0.0};
            for (std::size_t b = 0; b < bonds.size(); ++b) {
                const std::uint64_t m = bond_mask[b];
                const std::uint64_t bits = t & m;
                if (bits == 0 || bits == m) {
                    zz += 1.0; // aligned pair: s_i s_j = +1
                } else {
                    zz -= 1.0;
                    hop += in[t ^ m]; // |..01..> <-> |..10..| with weight 2J
                }
            }
            out[t] = spec.delta * zz * in[t] + 2.0 * spec.j * hop;
        }
        return;
    }
    if (spec.model == Model::tfim_lf) {
        for (std::uint64_t t = 0; t < d; ++t) {
            double zz = 0.0;
            for (const std::uint64_t m : bond_mask) {
                const std::uint64_t bits = t & m;
                zz += (bits == 0 || bits == m) ? 1.0 : -1.0;
            }
            double z = 0.0;
            cplx flip{0.0, 0.0};
            for (int q = 0; q < n; ++q) {
                z += ((t >> q) & 1) ? -1.0 : 1.0;
                flip += in[t ^ (std::uint64_t{1} << q)];
            }
            out[t] = (-spec.j * zz - spec.hz * z) * in[t] - spec.hx * flip;
        }
        return;
    }
    throw InvalidInputError("apply_hamiltonian: brickwork is a circuit, not a Hamiltonian");
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

double norm2(std::span<const cplx> a) {
    double acc = 0.0;
    for (const auto& v : a) acc += v.real() * v.real() + v.imag() * v.imag();
    return acc;
}

} // namespace

std::vector<cplx> apply_hamiltonian(const StateVector& psi, const QuenchSpec& spec) {
    if (spec.n_qubits != psi.n_qubits())
        throw InvalidInputError("apply_hamiltonian: spec/state qubit count mismatch");
    std::vector<cplx> out(psi.dim());
    apply_hamiltonian_raw(spec, psi.amplitudes(), out);
    return out;
}

StateVector krylov_step(const StateVector& psi, const QuenchSpec& spec, double dt,
                        double* norm_drift) {
    if (spec.model == Model::brickwork)
        throw InvalidInputError("krylov_step: brickwork is a circuit, not a Hamiltonian");
    if (spec.krylov_dim < 2) throw InvalidInputError("krylov_step: krylov_dim must be >= 2");
    if (spec.n_qubits != psi.n_qubits())
        throw InvalidInputError("krylov_step: spec/state qubit count mismatch");

    const std::uint64_t d = psi.dim();
    const int m_max = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(spec.krylov_dim), d));

    std::vector<std::vector<cplx>> basis;
    basis.emplace_back(psi.amplitudes().begin(), psi.amplitudes().end());
    std::vector<double> alpha, beta; // beta[j] couples basis j-1 and j

    std::vector<cplx> w(d);
    for (int jj = 0; jj < m_max; ++jj) {
        apply_hamiltonian_raw(spec, basis[static_cast<std::size_t>(jj)], w);
        const double a = dot(basis[static_cast<std::size_t>(jj)], w).real();
        alpha.push_back(a);
        for (std::uint64_t i = 0; i < d; ++i) w[i] -= a * basis[static_cast<std::size_t>(jj)][i];
        if (jj > 0) {
            const double b = beta[static_cast<std::size_t>(jj) - 1];
            for (std::uint64_t i = 0; i < d; ++i)
                w[i] -= b * basis[static_cast<std::size_t>(jj) - 1][i];
        }
        // full reorthogonalization against the whole basis
        for (const auto& v : basis) {
            const cplx c = dot(v, w);
            for (std::uint64_t i = 0; i < d; ++i) w[i] -= c * v[i];
        }
        if (jj + 1 == m_max) break;
        const double b = std::sqrt(norm2(w));
        if (b < 1e-14) break; // invariant subspace found: exact within the basis
        beta.push_back(b);
        std::vector<cplx> next(d);
        const double inv = 1.0 / b;
        for (std::uint64_t i = 0; i < d; ++i) next[i] = w[i] * inv;
        basis.push_back(std::move(next));
    }

    const int m = static_cast<int>(alpha.size());
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd offdiag(std::max(m - 1, 0));
    for (int i = 0; i + 1 < m; ++i) offdiag[i] = beta[static_cast<std::size_t>(i)];

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, offdiag);
    if (es.info() != Eigen::Success)
        throw InternalError("krylov_step: tridiagonal eigensolve failed");
    const Eigen::MatrixXd& s = es.eigenvectors();
    const Eigen::VectorXd& lambda = es.eigenvalues();

    // coeff_j = sum_k S(j,k) exp(-i dt lambda_k) S(0,k)
    std::vector<cplx> coeff(static_cast<std::size_t>(m), cplx{0.0, 0.0});
    for (int k = 0; k < m; ++k) {
        const cplx phase = std::polar(1.0, -dt * lambda[k]) * s(0, k);
        for (int j = 0; j < m; ++j) coeff[static_cast<std::size_t>(j)] += s(j, k) * phase;
    }

    std::vector<cplx> result(d, cplx{0.0, 0.0});
    for (int j = 0; j < m; ++j) {
        const cplx c = coeff[static_cast<std::size_t>(j)];
        const auto& v = basis[static_cast<std::size_t>(j)];
        for (std::uint64_t i = 0; i < d; ++i) result[i] += c * v[i];
    }

    const double nrm = std::sqrt(norm2(result));
    if (norm_drift) *norm_drift = std::abs(nrm - 1.0);
    if (nrm == 0.0) throw InternalError("krylov_step: propagated state vanished");
    const double inv = 1.0 / nrm;
    for (auto& v : result) v *= inv;
    return StateVector(psi.n_qubits(), std::move(result));
}

std::array<cplx, 16> haar_u4(Rng& rng) {
    Eigen::Matrix4cd a;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            const double re = rng.normal();
            const double im = rng.normal();
            a(r, c) = cplx{re, im};
        }
    Eigen::HouseholderQR<Eigen::Matrix4cd> qr(a);
    Eigen::Matrix4cd q = qr.householderQ();
    const Eigen::Matrix4cd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < 4; ++j) {
        const cplx rjj = r(j, j);
        const double mag = std::abs(rjj);
        q.col(j) *= mag == 0.0 ? cplx{1.0, 0.0} : rjj / mag;
    }
    std::array<cplx, 16> out;
    for (int rr = 0; rr < 4; ++rr)
        for (int cc = 0; cc < 4; ++cc) out[static_cast<std::size_t>(4 * rr + cc)] = q(rr, cc);
    return out;
}

std::array<cplx, 4> hadamard_gate() {
    const double s = 1.0 / std::sqrt(2.0);
    return {cplx{s, 0}, cplx{s, 0}, cplx{s, 0}, cplx{-s, 0}};
}

std::array<cplx, 16> cnot_gate() {
    // control = qubit argument i (low bit of the packed index), target = j
    std::array<cplx, 16> u{};
    u[4 * 0 + 0] = 1.0;
    u[4 * 3 + 1] = 1.0;
    u[4 * 2 + 2] = 1.0;
    u[4 * 1 + 3] = 1.0;
    return u;
}

std::array<cplx, 16> swap_gate() {
    std::array<cplx, 16> u{};
    u[4 * 0 + 0] = 1.0;
    u[4 * 2 + 1] = 1.0;
    u[4 * 1 + 2] = 1.0;
    u[4 * 3 + 3] = 1.0;
    return u;
}

void apply_single_qubit_gate(StateVector& psi, const std::array<cplx, 4>& u, int q) {
    if (q < 0 || q >= psi.n_qubits())
        throw InvalidInputError("apply_single_qubit_gate: qubit index out of range");
    const std::uint64_t m = std::uint64_t{1} << q;
    const std::uint64_t d = psi.dim();
    const std::span<cplx> a = psi.amplitudes();
    for (std::uint64_t i = 0; i < d; ++i) {
        if (i & m) continue;
        const cplx a0 = a[i];
        const cplx a1 = a[i | m];
        a[i] = u[0] * a0 + u[1] * a1;
        a[i | m] = u[2] * a0 + u[3] * a1;
    }
}

void apply_two_qubit_gate(StateVector& psi, const std::array<cplx, 16>& u, int i, int j) {
    const int n = psi.n_qubits();
    if (i < 0 || i >= n || j < 0 || j >= n || i == j)
        throw InvalidInputError("apply_two_qubit_gate: need two distinct in-range qubits");
    const std::uint64_t mi = std::uint64_t{1} << i;
    const std::uint64_t mj = std::uint64_t{1} << j;
    const std::uint64_t d = psi.dim();
    const std::span<cplx> a = psi.amplitudes();
    for (std::uint64_t base = 0; base < d; ++base) {
        if (base & (mi | mj)) continue;
        // local index packs (bit_j << 1) | bit_i
        const cplx v0 = a[base];
        const cplx v1 = a[base | mi];
        const cplx v2 = a[base | mj];
        const cplx v3 = a[base | mi | mj];
        a[base] = u[0] * v0 + u[1] * v1 + u[2] * v2 + u[3] * v3;
        a[base | mi] = u[4] * v0 + u[5] * v1 + u[6] * v2 + u[7] * v3;
        a[base | mj] = u[8] * v0 + u[9] * v1 + u[10] * v2 + u[11] * v3;
        a[base | mi | mj] = u[12] * v0 + u[13] * v1 + u[14] * v2 + u[15] * v3;
    }
}

void brickwork_step(StateVector& psi, Rng& rng, int t_index) {
    const int n = psi.n_qubits();
    if (n % 2 != 0)
        throw InvalidInputError("brickwork_step: the layer pattern needs an even qubit count");
    if (t_index < 0) throw InvalidInputError("brickwork_step: negative step index");
    for (int i = 0; i + 1 < n; i += 2) // even layer: (0,1)(2,3)...
        apply_two_qubit_gate(psi, haar_u4(rng), i, i + 1);
    for (int i = 1; i + 1 < n; i += 2) // odd layer: (1,2)(3,4)...
        apply_two_qubit_gate(psi, haar_u4(rng), i, i + 1);
}

SreTrace run_quench(const QuenchSpec& spec, const SreEvaluator& engine,
                    const RunQuenchOptions& opts) {
    spec.validate();
    const int points = spec.n_steps + 1;
    const auto n_samples = static_cast<std::size_t>(spec.samples);

    SreTrace trace;
    trace.spec = spec;
    trace.times.resize(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        trace.times[static_cast<std::size_t>(i)] =
            spec.model == Model::brickwork ? static_cast<double>(i) : spec.dt * i;

    // file-based initial state is shared by all samples; load it once
    StateVector file_init = StateVector::computational_zero(1);
    if (spec.initial == InitialKind::file) {
        file_init = load_state(spec.initial_file);
        if (file_init.n_qubits() != spec.n_qubits)
            throw InvalidInputError("quench: initial state file has wrong qubit count");
    }

    std::vector<std::vector<double>> per_sample(n_samples,
                                                std::vector<double>(static_cast<std::size_t>(points)));

    const int workers = resolve_workers(opts.workers);
    parallel_for_chunks(0, n_samples, workers, [&](int, std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t s = lo; s < hi; ++s) {
            Rng rng(RngSpec{spec.rng.seed, spec.rng.stream + s});
            StateVector psi = [&] {
                switch (spec.initial) {
                case InitialKind::neel: return neel_state(spec.n_qubits);
                case InitialKind::all_up: return all_up_state(spec.n_qubits);
                case InitialKind::random_product:
                    return random_product_state(spec.n_qubits, rng, spec.sphere_uniform);
                case InitialKind::file: return file_init;
                }
                throw InternalError("unknown initial enum");
            }();
            per_sample[s][0] = engine(psi).m2;
            for (int step = 1; step <= spec.n_steps; ++step) {
                if (spec.model == Model::brickwork)
                    brickwork_step(psi, rng, step - 1);
                else
                    psi = krylov_step(psi, spec, spec.dt);
                per_sample[s][static_cast<std::size_t>(step)] = engine(psi).m2;
            }
        }
    });

    trace.m2_mean.resize(static_cast<std::size_t>(points));
    trace.m2_stderr.resize(static_cast<std::size_t>(points));
    std::vector<double> column(n_samples);
    for (int i = 0; i < points; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        for (std::size_t s = 0; s < n_samples; ++s) column[s] = per_sample[s][ii];
        const double mean = pairwise_sum(column) / static_cast<double>(n_samples);
        double stderr_ = std::numeric_limits<double>::quiet_NaN();
        if (n_samples >= 2) {
            std::vector<double> dev2(n_samples);
            for (std::size_t s = 0; s < n_samples; ++s) {
                const double dv = column[s] - mean;
                dev2[s] = dv * dv;
            }
            const double var = pairwise_sum(dev2) / static_cast<double>(n_samples - 1);
            stderr_ = std::sqrt(var / static_cast<double>(n_samples));
        }
        if (mean < -1e-9 || mean > spec.n_qubits + 1e-9)
            throw InternalError("quench: ensemble mean left [0, n_qubits]");
        trace.m2_mean[ii] = mean;
        trace.m2_stderr[ii] = stderr_;
    }
    if (opts.keep_per_sample) trace.per_sample = std::move(per_sample);
    return trace;
}

SreTrace run_quench(const QuenchSpec& spec, const RunQuenchOptions& opts) {
    const int w = resolve_workers(opts.workers);
    const int sample_threads = std::min(w, std::max(1, spec.samples));
    const int engine_workers = std::max(1, w / sample_threads);
    RunQuenchOptions inner = opts;
    inner.workers = sample_threads;
    return run_quench(
        spec, [engine_workers](const StateVector& s) { return sre2_exact(s, engine_workers); },
        inner);
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void write_trace_csv(const SreTrace& trace, const std::filesystem::path& path,
                     bool include_samples) {
    std::ofstream out(path);
    if (!out) throw InvalidInputError("cannot open " + path.string() + " for writing");
    out << "# schema: magicfwht.trace.v1\n";
    out << "t,mean,stderr";
    const std::size_t n_samples = include_samples ? trace.per_sample.size() : 0;
    for (std::size_t s = 0; s < n_samples; ++s) out << ",sample_" << s;
    out << '\n';
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        out << fmt_double(trace.times[i]) << ',' << fmt_double(trace.m2_mean[i]) << ','
            << fmt_double(trace.m2_stderr[i]);
        for (std::size_t s = 0; s < n_samples; ++s) out << ',' << fmt_double(trace.per_sample[s][i]);
        out << '\n';
    }
    if (!out) throw InvalidInputError("write to " + path.string() + " failed");
}

nlohmann::json to_json(const QuenchSpec& spec) {
    return nlohmann::json{{"model", to_string(spec.model)},
                          {"n_qubits", spec.n_qubits},
                          {"j", spec.j},
                          {"delta", spec.delta},
                          {"hx", spec.hx},
                          {"hz", spec.hz},
                          {"boundary", to_string(spec.boundary)},
                          {"dt", spec.dt},
                          {"n_steps", spec.n_steps},
                          {"krylov_dim", spec.krylov_dim},
                          {"samples", spec.samples},
                          {"seed", spec.rng.seed},
                          {"stream", spec.rng.stream},
                          {"initial", to_string(spec.initial)},
                          {"initial_file", spec.initial_file.string()},
                          {"sphere_uniform", spec.sphere_uniform}};
}

QuenchSpec quench_spec_from_json(const nlohmann::json& j) {
    try {
        QuenchSpec spec;
        spec.model = model_from_string(j.at("model").get<std::string>());
        spec.n_qubits = j.at("n_qubits").get<int>();
        spec.j = j.at("j").get<double>();
        spec.delta = j.at("delta").get<double>();
        spec.hx = j.at("hx").get<double>();
        spec.hz = j.at("hz").get<double>();
        spec.boundary = boundary_from_string(j.at("boundary").get<std::string>());
        spec.dt = j.at("dt").get<double>();
        spec.n_steps = j.at("n_steps").get<int>();
        spec.krylov_dim = j.at("krylov_dim").get<int>();
        spec.samples = j.at("samples").get<int>();
        spec.rng.seed = j.at("seed").get<std::uint64_t>();
        spec.rng.stream = j.at("stream").get<std::uint64_t>();
        spec.initial = initial_from_string(j.at("initial").get<std::string>());
        spec.initial_file = j.at("initial_file").get<std::string>();
        spec.sphere_uniform = j.at("sphere_uniform").get<bool>();
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInputError(std::string("bad quench spec json: ") + e.what());
    }
}

void write_trace_json(const SreTrace& trace, const std::filesystem::path& path) {
    nlohmann::json j{{"schema", "magicfwht.trace.v1"},
                     {"spec", to_json(trace.spec)},
                     {"times", trace.times},
                     {"m2_mean", trace.m2_mean},
                     {"m2_stderr", trace.m2_stderr}};
    if (!trace.per_sample.empty()) j["per_sample"] = trace.per_sample;
    std::ofstream out(path);
    if (!out) throw InvalidInputError("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw InvalidInputError("write to " + path.string() + " failed");
}

} // namespace mfwht
