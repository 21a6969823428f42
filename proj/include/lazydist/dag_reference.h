#pragma once

#include "lazydist/access.h"
#include "lazydist/dependency_system.h"

#include <map>
#include <set>
#include <vector>

namespace lazydist {

class op_executor;
class transport;

/// Full dependency DAG built by comparing every new operation against every live one. Serves as
/// the correctness oracle for dependency_system and as the cost baseline for its comparison counts.
class dag_reference {
  public:
	/// Adds `id` with an edge from every live operation that has a conflicting access. The edge
	/// weight (and the in-degree contribution) is the number of conflicting access pairs, matching
	/// dependency_system's counters.
	void insert(op_id id, rank_t rank, op_class cls, std::vector<access> accesses);
	/// Removes `id` and its out-edges; returns successors whose in-degree dropped to zero.
	std::vector<op_id> remove(op_id id);

	bool contains(op_id id) const { return m_nodes.count(id) != 0; }
	int in_degree(op_id id) const { return m_nodes.at(id).in_degree; }
	rank_t rank_of(op_id id) const { return m_nodes.at(id).rank; }
	op_class class_of(op_id id) const { return m_nodes.at(id).cls; }
	std::size_t size() const { return m_nodes.size(); }
	bool empty() const { return m_nodes.empty(); }
	std::vector<op_id> live_ops() const;

	/// Every edge ever added, as (predecessor, successor).
	const std::set<std::pair<op_id, op_id>>& edges() const { return m_all_edges; }
	/// Number of operation-pair tests performed by insert().
	std::size_t comparison_count() const { return m_comparisons; }

	/// Graphviz DOT listing of live nodes and edges.
	std::string dump_dot() const;

  private:
	struct node {
		rank_t rank;
		op_class cls;
		std::vector<access> accesses;
		int in_degree = 0;
		std::map<op_id, int> successors; ///< successor -> weight
	};

	std::map<op_id, node> m_nodes;
	std::set<std::pair<op_id, op_id>> m_all_edges;
	std::size_t m_comparisons = 0;
};

/// Executes every node of `graph` in a legal order: repeatedly takes the FIFO head of the
/// in-degree-zero set and runs it to completion, blocking on each communication individually.
/// A receive whose matching send has not been posted yet is parked and finished as soon as that
/// send runs. Throws deadlock_error if nodes remain but none can run.
void dag_schedule_blocking(dag_reference& graph, op_executor& exec, transport& net);

} // namespace lazydist
