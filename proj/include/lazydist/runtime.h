#pragma once

#include "lazydist/block_layout.h"
#include "lazydist/dag_reference.h"
#include "lazydist/dependency_system.h"
#include "lazydist/flush_engine.h"
#include "lazydist/transport.h"
#include "lazydist/ufunc.h"

#include <memory>
#include <unordered_map>
#include <variant>
#include <vector>

namespace lazydist {

/// Which rank computes a piece of an output view.
enum class exec_policy {
	/// Each output sub-view-block is computed by the rank that owns it; inputs are fetched there and
	/// nothing is written back.
	output_owner,
	/// A whole output view-block is computed by the owner of its first element; output pieces owned
	/// elsewhere are sent back after the computation.
	view_block_first,
};

struct runtime_config {
	int nprocs = 1;
	latency_model model{};
	flush_mode mode = flush_mode::latency_hiding;
	/// Number of delayed array operations (creations, ufuncs, copies) that triggers a flush.
	std::size_t flush_threshold = 512;
	exec_policy policy = exec_policy::output_owner;
	bool check_invariants = false;
	bool log_enabled = false;
};

using operand = std::variant<array_view, scalar>;

/// Elements of one buffer (a base-block or a staging buffer) on one rank.
struct buffer_ref {
	block_key block;
	region range;
};

struct fill_payload {
	block_key block;
	std::vector<std::uint64_t> words;
};

struct compute_payload {
	ufunc_ptr spec;
	dtype type = dtype::f64;
	buffer_ref out;
	std::vector<std::variant<buffer_ref, scalar>> ins;
};

struct send_payload {
	rank_t dst = 0;
	message_tag tag;
	buffer_ref src;
};

struct recv_payload {
	rank_t src = 0;
	message_tag tag;
	buffer_ref dst;
};

/// One operation-node recorded by the lazy frontend.
struct recorded_op {
	op_id id = 0;
	rank_t rank = 0;
	op_kind kind = op_kind::compute;
	std::variant<fill_payload, compute_payload, send_payload, recv_payload> payload;
	std::vector<access> accesses;
};

/// Operations recorded since the last flush.
struct deferred_program {
	std::vector<recorded_op> nodes;
	/// User-level array operations (creations, ufuncs, copies) since the last flush.
	std::size_t delayed_ops = 0;
	std::size_t threshold = 512;
};

struct run_metrics {
	int nprocs = 0;
	std::vector<double> wait, compute, idle;
	double makespan = 0;
	std::uint64_t messages = 0;
	std::uint64_t bytes = 0;
	std::size_t comparisons = 0;
	std::size_t flushes = 0;
	std::size_t nodes = 0;

	double total_wait() const;
	double total_compute() const;
	/// Aggregate wait time over aggregate rank time (P * makespan); 0 for an empty run.
	double wait_fraction() const;
};

/// The lazy array frontend over a simulated P-rank machine.
///
/// Array creations, ufuncs and copies are recorded as operation-nodes and registered with the
/// dependency system; nothing executes until a flush, which happens on read_elements(), when the
/// number of delayed operations reaches the threshold, or on finalize().
class runtime final : public op_executor {
  public:
	explicit runtime(runtime_config cfg);

	/// Creates a distributed array. `values` is row-major over the whole shape; empty means zeros.
	array_view create_array(coords shape, coords block_size, dtype type, const std::vector<scalar>& values = {});

	/// Records out[...] = spec(ins[...]) elementwise. All view operands must have out's extent and
	/// element kind. An input may alias `out` only if it selects exactly the same elements; partial
	/// overlaps throw std::invalid_argument.
	void record_ufunc(const ufunc_ptr& spec, const array_view& out, const std::vector<operand>& ins);
	void record_copy(const array_view& out, const array_view& in);

	/// Flushes, then gathers the view's elements in row-major view order.
	std::vector<scalar> read_elements(const array_view& view);
	std::vector<double> read_f64(const array_view& view);
	std::vector<std::int64_t> read_i64(const array_view& view);

	/// Flushes if the number of delayed operations has reached the threshold.
	bool maybe_autoflush();
	void flush();
	void finalize() { flush(); }

	/// Runs the pending operations generation by generation (see naive_bsp_flush). After a reported
	/// deadlock the runtime is unusable.
	bsp_result naive_flush();

	const runtime_config& config() const { return m_cfg; }
	const deferred_program& program() const { return m_program; }
	const dependency_system& deps() const { return m_deps; }
	const dag_reference& dag() const { return m_dag; }
	const transport& net() const { return m_net; }
	op_log& log() { return m_log; }
	const op_log& log() const { return m_log; }
	run_metrics metrics() const;

	// op_executor
	op_kind kind_of(op_id id) const override;
	rank_t rank_of(op_id id) const override;
	index_t compute(op_id id) override;
	send_request make_send(op_id id) override;
	recv_request make_recv(op_id id) override;
	void deliver(op_id id, std::span<const std::byte> payload) override;
	std::vector<op_id> recording_order() const override;

  private:
	struct block_buffer {
		coords extents;
		std::vector<std::uint64_t> words;
	};

	struct node_spec {
		rank_t rank;
		op_kind kind;
		std::variant<fill_payload, compute_payload, send_payload, recv_payload> payload;
		std::vector<access> accesses;
	};

	void emit(node_spec spec);
	const recorded_op& node(op_id id) const;
	block_buffer& buffer(rank_t rank, const block_key& key);
	void check_view(const array_view& v) const;
	index_t allocate_staging(rank_t rank, coords extents);
	template <typename T>
	void run_compute(rank_t rank, const compute_payload& p);

	runtime_config m_cfg;
	transport m_net;
	dependency_system m_deps;
	dag_reference m_dag;
	op_log m_log;
	deferred_program m_program;
	op_id m_next_op = 1;
	op_id m_first_pending = 1;
	array_id m_next_array = 1;
	index_t m_next_staging = 1;
	std::size_t m_flushes = 0;
	std::size_t m_total_nodes = 0;
	std::unordered_map<array_id, std::shared_ptr<const array_base>> m_arrays;
	std::vector<std::unordered_map<block_key, block_buffer>> m_stores;
	std::unordered_map<index_t, std::pair<rank_t, coords>> m_staging;
};

} // namespace lazydist
