#pragma once

#include "lazydist/runtime.h"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace lazydist {

enum class kernel_kind {
	/// 1-D integer three-point stencil, N[1:n-1] = M[2:] + M[:-2], alternating roles each iteration.
	stencil3,
	/// Jacobi iteration on a row-distributed, diagonally dominant matrix. x is gathered every
	/// iteration and broadcast column by column as scalars.
	jacobi,
	/// Five-point Jacobi stencil on an n x n grid with a read of the residual every iteration.
	jacobi_stencil,
	/// Aligned elementwise arithmetic without any communication.
	elementwise,
};

const char* to_string(kernel_kind k);
kernel_kind parse_kernel(const std::string& name);
flush_mode parse_mode(const std::string& name);

struct benchmark_spec {
	kernel_kind kernel = kernel_kind::stencil3;
	index_t size = 64;
	index_t block = 8;
	std::vector<int> ranks{1};
	int iters = 1;
	std::vector<flush_mode> modes{flush_mode::latency_hiding, flush_mode::blocking};
	std::size_t threshold = 512;
	latency_model model{};
	std::uint64_t seed = 1;

	/// Throws std::invalid_argument on sizes, blocks, ranks or iterations below 1.
	void validate() const;
};

struct bench_row {
	kernel_kind kernel = kernel_kind::stencil3;
	flush_mode mode = flush_mode::latency_hiding;
	int ranks = 1;
	double makespan = 0;
	double wait_pct = 0;
	double speedup = 0;
	std::size_t comparisons = 0;
	std::uint64_t bytes = 0;
	std::uint64_t messages = 0;
};

/// Final array contents of a kernel run plus the per-iteration residuals it read.
struct kernel_result {
	std::vector<scalar> values;
	std::vector<double> residuals;
};

struct run_output {
	kernel_result result;
	run_metrics metrics;
	std::string log; ///< executed-op log, if requested
};

class oracle_mismatch : public std::runtime_error {
  public:
	using std::runtime_error::runtime_error;
};

/// Evaluates the kernel with plain in-memory arrays, in program order.
kernel_result sequential_oracle(const benchmark_spec& spec);

/// Runs the kernel on the lazy runtime with `ranks` simulated ranks.
run_output run_distributed(const benchmark_spec& spec, int ranks, flush_mode mode, bool keep_log = false, bool check_invariants = false);

/// Throws oracle_mismatch with a diff report unless integers match exactly and floats within a
/// relative error of 1e-12.
void check_against_oracle(const kernel_result& got, const kernel_result& want);

/// One row per rank count x mode, each validated against the oracle. Speedup is relative to the
/// single-rank makespan of the same mode. If `logs` is given, it receives one log per row.
std::vector<bench_row> run_benchmark(const benchmark_spec& spec, std::vector<std::string>* logs = nullptr);

std::string csv_report(const std::vector<bench_row>& rows);
std::string summary_table(const std::vector<bench_row>& rows);
void emit_report(const std::vector<bench_row>& rows, const std::string& csv_path, std::ostream& summary);

struct deadlock_demo_result {
	bsp_result naive;
	bool latency_hiding_completed = false;
	std::vector<std::int64_t> values; ///< Z after the latency-hiding flush
	std::string log;
};

/// Two ranks, X, Y, Z of six integers in blocks of three. Y = X + 1 is computed locally, then
/// Z[0:3] = Y[3:6] and Z[3:6] = Y[0:3] swap halves across ranks. Both receives are ready at once
/// while the matching sends wait for the additions, so a generation-by-generation evaluator blocks
/// forever in its first generation. The same program is then flushed with latency hiding.
deadlock_demo_result run_deadlock_demo();

} // namespace lazydist
