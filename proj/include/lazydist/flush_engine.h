#pragma once

#include "lazydist/dependency_system.h"
#include "lazydist/transport.h"

#include <iosfwd>
#include <string>
#include <vector>

namespace lazydist {

enum class op_kind { send, recv, compute, fill };

const char* to_string(op_kind k);
inline op_class class_of(op_kind k) { return k == op_kind::send || k == op_kind::recv ? op_class::communication : op_class::computation; }

struct send_request {
	rank_t dst = 0;
	message_tag tag;
	std::vector<std::byte> payload;
};

struct recv_request {
	rank_t src = 0;
	message_tag tag;
};

/// The data side of recorded operations. The flush engine decides when things run; the executor
/// performs them on the per-rank element stores.
class op_executor {
  public:
	virtual ~op_executor() = default;

	virtual op_kind kind_of(op_id id) const = 0;
	virtual rank_t rank_of(op_id id) const = 0;
	/// Performs a computation (or fill) and returns the number of elements it touched.
	virtual index_t compute(op_id id) = 0;
	/// Snapshots the source range of a send.
	virtual send_request make_send(op_id id) = 0;
	virtual recv_request make_recv(op_id id) = 0;
	/// Stores the payload of a completed receive.
	virtual void deliver(op_id id, std::span<const std::byte> payload) = 0;
	/// All pending operations in recording order.
	virtual std::vector<op_id> recording_order() const = 0;
};

enum class flush_event { initiate, complete, compute_start, compute_end, stall_start, stall_end };

const char* to_string(flush_event e);

/// One line of the executed-op log. `op` is 0 for stall events.
struct log_record {
	double time = 0;
	rank_t rank = 0;
	op_id op = 0;
	op_kind kind = op_kind::compute;
	flush_event event = flush_event::initiate;
	std::size_t comm_ready = 0;    ///< communication ready-queue length of `rank` at the event
	std::size_t compute_ready = 0; ///< computation ready-queue length of `rank` at the event
};

/// Line-delimited rendering: `t=<time> rank=<r> op=<id> kind=<k> event=<e> comm_ready=<n> compute_ready=<n>`.
std::string format_log_line(const log_record& r);

class op_log {
  public:
	void add(const log_record& r) {
		if(m_enabled) m_records.push_back(r);
	}
	void set_enabled(bool on) { m_enabled = on; }
	bool enabled() const { return m_enabled; }
	const std::vector<log_record>& records() const { return m_records; }
	void clear() { m_records.clear(); }
	void write(std::ostream& os) const;
	std::string str() const;

  private:
	bool m_enabled = true;
	std::vector<log_record> m_records;
};

enum class flush_mode { latency_hiding, blocking, dag_blocking };

const char* to_string(flush_mode m);

struct flush_options {
	flush_mode mode = flush_mode::latency_hiding;
	bool check_invariants = false;
	op_log* log = nullptr;
};

/// Runs every operation in `deps` to completion. Each rank runs its own loop over its partition of
/// the ready queue; ranks are interleaved by a conservative discrete-event scheduler that always
/// advances the rank with the smallest next event time (ties: lowest rank).
///
/// latency_hiding, per rank and iteration:
///   1. initiate every ready communication operation,
///   2. retire all transfers that have completed by now (non-blocking),
///   3. if only computation is ready, execute the FIFO head and retire it,
///   4. if nothing is ready but transfers are in flight, stall until the earliest completes
///      (accounted as wait time).
/// blocking: each rank executes its operations in recording order and waits for every
/// communication right after initiating it.
///
/// Throws deadlock_error if operations remain but no rank can make progress, and
/// invariant_violation if check_invariants is set and one of the scheduling invariants breaks.
void flush(dependency_system& deps, transport& net, op_executor& exec, const flush_options& opts);

/// Asserts the ready-completeness invariant plus, for `rank`, that no communication is ready when
/// a computation starts (`starting_compute`) or that no computation is ready when blocking
/// (`about_to_block`).
void assert_invariants(const dependency_system& deps, rank_t rank, bool starting_compute, bool about_to_block);

struct bsp_result {
	bool completed = false;
	int generations = 0;
	/// Receives of the stuck generation whose matching sends were never posted.
	std::vector<op_id> blocked;
	std::string report;
};

/// Generation-by-generation evaluation: run every ready operation (initiating all communication),
/// block until all of the generation's communication completes, retire the generation, repeat.
/// Returns a deadlock report instead of hanging when a generation waits on a send that belongs
/// to a later generation.
bsp_result naive_bsp_flush(dependency_system& deps, transport& net, op_executor& exec);

} // namespace lazydist
