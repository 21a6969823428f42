#pragma once

#include "lazydist/access.h"

#include <deque>
#include <list>
#include <map>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lazydist {

/// Scheduling class of an operation-node; the ready queue keeps one FIFO per class and rank.
enum class op_class { communication, computation };

/// Per-base-block dependency lists of access-nodes plus reference-counted operation-nodes.
///
/// Inserting an operation appends each of its access-nodes to the list of the block it touches and
/// sets the operation's counter to the number of (earlier live access-node, own access-node) pairs
/// that conflict. Retiring an operation removes its access-nodes; every later access-node in the
/// same list that conflicted with a removed node loses one count. Operations whose counter is zero
/// sit in the ready queue until they are taken for execution.
///
/// All access-nodes of an operation belong to blocks held by the operation's rank, so the ready
/// queue is partitioned by rank and class.
class dependency_system {
  public:
	enum class op_state { waiting, ready, executing };

	void insert(op_id id, rank_t rank, op_class cls, std::vector<access> accesses);

	/// Removes a finished operation and returns the operations that became ready (in promotion
	/// order). Throws invariant_violation if `id` still has unresolved dependencies.
	std::vector<op_id> retire(op_id id);

	bool has_ready(rank_t rank, op_class cls) const;
	/// Ready operations of one rank and class, FIFO order, without removing them.
	std::vector<op_id> ready_ops(rank_t rank, op_class cls) const;
	/// Ready operations of a class across all ranks.
	std::vector<op_id> ready_ops(op_class cls) const;
	std::size_t ready_count(rank_t rank, op_class cls) const;

	/// Removes and returns the FIFO head; the operation moves to the executing state.
	op_id take_ready(rank_t rank, op_class cls);
	/// Removes a specific ready operation from its queue (used by in-order executors).
	void take(op_id id);

	bool contains(op_id id) const { return m_ops.count(id) != 0; }
	int counter(op_id id) const;
	op_state state(op_id id) const;
	rank_t rank_of(op_id id) const;
	op_class class_of(op_id id) const;
	std::size_t live_count() const { return m_ops.size(); }
	bool empty() const { return m_ops.empty(); }
	std::vector<op_id> live_ops() const;
	std::set<rank_t> ranks() const;

	/// Cumulative number of pairwise access-node conflict tests.
	std::size_t comparison_count() const { return m_comparisons; }
	void reset_comparison_count() { m_comparisons = 0; }

	/// When enabled, every conflicting (predecessor, successor) operation pair found during insertion
	/// is recorded.
	void set_record_edges(bool on) { m_record_edges = on; }
	const std::set<std::pair<op_id, op_id>>& recorded_edges() const { return m_edges; }

	/// Invariant: every live operation with counter zero that is not executing is in the ready queue,
	/// and nothing else is. Throws invariant_violation.
	void check_ready_completeness() const;

	/// Textual listing of every dependency-list (block, then access-nodes in insertion order).
	std::string dump() const;

  private:
	struct access_node {
		access acc;
		op_id op;
	};
	using node_list = std::list<access_node>;

	struct op_record {
		rank_t rank;
		op_class cls;
		int counter = 0;
		op_state state = op_state::waiting;
		std::vector<std::pair<block_key, node_list::iterator>> nodes;
	};

	std::deque<op_id>& queue(rank_t rank, op_class cls);
	void make_ready(op_id id, op_record& rec);

	std::unordered_map<op_id, op_record> m_ops;
	std::unordered_map<block_key, node_list> m_lists;
	std::map<std::pair<rank_t, int>, std::deque<op_id>> m_ready;
	std::size_t m_comparisons = 0;
	bool m_record_edges = false;
	std::set<std::pair<op_id, op_id>> m_edges;
};

} // namespace lazydist
