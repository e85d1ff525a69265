#pragma once

#include "magicfwht/rng.hpp"
#include "magicfwht/sre.hpp"
#include "magicfwht/state_vector.hpp"

#include <json.hpp>

#include <array>
#include <filesystem>
#include <functional>
#include <string_view>
#include <vector>

namespace mfwht {

enum class Model { xxz, tfim_lf, brickwork };
enum class Boundary { periodic, open };
enum class InitialKind { neel, random_product, all_up, file };

std::string_view to_string(Model m);
std::string_view to_string(Boundary b);
std::string_view to_string(InitialKind k);
Model model_from_string(std::string_view s);
Boundary boundary_from_string(std::string_view s);
InitialKind initial_from_string(std::string_view s);

/// Full description of one dynamics experiment.
///
/// Hamiltonians (qubit i couples to i+1, indices mod N when periodic):
///   xxz:      H = sum_i [ J (X_i X_{i+1} + Y_i Y_{i+1}) + delta Z_i Z_{i+1} ]
///   tfim_lf:  H = -J sum_i Z_i Z_{i+1} - hx sum_i X_i - hz sum_i Z_i
/// brickwork: one step = an even-bond layer (0,1)(2,3)... then an odd-bond
/// layer (1,2)(3,4)..., fresh Haar U(4) per gate, open boundary, even N only.
struct QuenchSpec {
    Model model = Model::xxz;
    int n_qubits = 0;
    double j = 1.0;
    double delta = 0.5; // xxz only
    double hx = 1.5;    // tfim_lf only
    double hz = 1.5;    // tfim_lf only
    Boundary boundary = Boundary::periodic;
    double dt = 0.05;    // Hamiltonian models only
    int n_steps = 0;
    int krylov_dim = 30; // Hamiltonian models only
    int samples = 1;
    RngSpec rng{};
    InitialKind initial = InitialKind::neel;
    std::filesystem::path initial_file{}; // when initial == file
    bool sphere_uniform = false;          // random_product measure flag

    /// Throws InvalidInputError on inconsistent parameters.
    void validate() const;
};

/// Ensemble time series of m2: times[i] is i*dt for Hamiltonian models and
/// the layer count for brickwork; stderr is sample stddev / sqrt(samples)
/// (NaN when samples == 1). per_sample is kept only on request.
struct SreTrace {
    std::vector<double> times;
    std::vector<double> m2_mean;
    std::vector<double> m2_stderr;
    std::vector<std::vector<double>> per_sample; // [sample][time index]
    QuenchSpec spec;
};

/// H|psi>, unnormalized, computed matrix-free in O(N d): XX+YY terms swap
/// amplitudes across anti-aligned neighbor pairs with coefficient 2J, ZZ/Z
/// are diagonal, X is a bit flip. Rejects brickwork specs.
std::vector<cplx> apply_hamiltonian(const StateVector& psi, const QuenchSpec& spec);

/// One step of e^{-iH dt}|psi> by the Lanczos/Krylov method: build an
/// orthonormal basis of dimension spec.krylov_dim (full reorthogonalization;
/// a breakdown beta < 1e-14 just truncates the basis), exponentiate the
/// tridiagonal projection, map back, renormalize. If norm_drift is non-null
/// it receives |norm - 1| of the raw result before renormalization.
StateVector krylov_step(const StateVector& psi, const QuenchSpec& spec, double dt,
                        double* norm_drift = nullptr);

/// Haar-distributed U(4) matrix, row-major: Ginibre sample, QR, then each
/// column of Q is multiplied by r_jj/|r_jj| so the implicit R has a positive
/// real diagonal (the canonical factorization; without this the output
/// distribution would inherit the QR routine's sign conventions).
std::array<cplx, 16> haar_u4(Rng& rng);

/// Gate matrices for tests and circuit construction, in the convention of
/// apply_two_qubit_gate below. cnot_gate: control = first qubit argument i,
/// target = j.
std::array<cplx, 4> hadamard_gate();
std::array<cplx, 16> cnot_gate();
std::array<cplx, 16> swap_gate();

void apply_single_qubit_gate(StateVector& psi, const std::array<cplx, 4>& u, int q);

/// In-place two-qubit gate on qubits (i, j), all other qubits spectators.
/// U's row/column index packs the two bits as (bit_j << 1) | bit_i.
void apply_two_qubit_gate(StateVector& psi, const std::array<cplx, 16>& u, int i, int j);

/// One brickwork step t_index: even-bond layer then odd-bond layer, each
/// gate a fresh draw from rng. n_qubits must be even.
void brickwork_step(StateVector& psi, Rng& rng, int t_index);

using SreEvaluator = std::function<SreResult(const StateVector&)>;

struct RunQuenchOptions {
    int workers = 0; // parallelism across samples; 0 = detected core count
    bool keep_per_sample = false;
};

/// Run the experiment: per sample, build the initial state (random-product
/// draws and brickwork gates for sample s come from stream spec.rng.stream+s),
/// record m2 through `engine` at t=0 and after every step, then aggregate
/// mean and standard error in fixed sample order. Samples run in parallel;
/// each trajectory is serial, so results are worker-count independent.
SreTrace run_quench(const QuenchSpec& spec, const SreEvaluator& engine,
                    const RunQuenchOptions& opts = {});

/// Convenience overload: engine = sre2_exact, workers split between samples
/// and the per-call engine.
SreTrace run_quench(const QuenchSpec& spec, const RunQuenchOptions& opts = {});

/// Trace serialization. CSV columns: t,mean,stderr[,sample_k...]; JSON holds
/// the spec, the arrays, and the schema tag. Numbers round-trip exactly.
void write_trace_csv(const SreTrace& trace, const std::filesystem::path& path,
                     bool include_samples = false);
void write_trace_json(const SreTrace& trace, const std::filesystem::path& path);

/// Lossless QuenchSpec <-> JSON (used by trace files and run manifests).
nlohmann::json to_json(const QuenchSpec& spec);
QuenchSpec quench_spec_from_json(const nlohmann::json& j);

} // namespace mfwht
