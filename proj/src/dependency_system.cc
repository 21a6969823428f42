#include "lazydist/dependency_system.h"

#include <algorithm>

#include <fmt/format.h>

namespace lazydist {

std::string to_string(const block_key& k) {
	if(k.is_staging()) return fmt::format("staging:{}", k.index);
	return fmt::format("array{}:{}", k.space, k.index);
}

bool conflict(const access& a, const access& b) {
	if(a.mode == access_mode::read && b.mode == access_mode::read) return false;
	if(!(a.block == b.block)) return false;
	return regions_intersect(a.range, b.range);
}

std::deque<op_id>& dependency_system::queue(rank_t rank, op_class cls) { return m_ready[{rank, static_cast<int>(cls)}]; }

void dependency_system::make_ready(op_id id, op_record& rec) {
	rec.state = op_state::ready;
	queue(rec.rank, rec.cls).push_back(id);
}

void dependency_system::insert(op_id id, rank_t rank, op_class cls, std::vector<access> accesses) {
	if(m_ops.count(id) != 0) throw invariant_violation(fmt::format("operation {} inserted twice", id));
	auto& rec = m_ops[id];
	rec.rank = rank;
	rec.cls = cls;

	// Count against earlier operations only; own nodes are appended after all scans.
	for(const auto& acc : accesses) {
		const auto it = m_lists.find(acc.block);
		if(it == m_lists.end()) continue;
		for(const auto& node : it->second) {
			++m_comparisons;
			if(conflict(node.acc, acc)) {
				++rec.counter;
				if(m_record_edges) m_edges.emplace(node.op, id);
			}
		}
	}
	rec.nodes.reserve(accesses.size());
	for(auto& acc : accesses) {
		auto& list = m_lists[acc.block];
		const auto key = acc.block;
		list.push_back(access_node{std::move(acc), id});
		rec.nodes.emplace_back(key, std::prev(list.end()));
	}
	if(rec.counter == 0) make_ready(id, rec);
}

std::vector<op_id> dependency_system::retire(op_id id) {
	const auto it = m_ops.find(id);
	if(it == m_ops.end()) throw invariant_violation(fmt::format("retiring unknown operation {}", id));
	auto& rec = it->second;
	if(rec.counter != 0) throw invariant_violation(fmt::format("retiring operation {} with counter {}", id, rec.counter));
	if(rec.state == op_state::ready) {
		auto& q = queue(rec.rank, rec.cls);
		q.erase(std::find(q.begin(), q.end(), id));
	}

	std::vector<op_id> promoted;
	for(const auto& [key, node_it] : rec.nodes) {
		auto& list = m_lists.at(key);
		for(auto later = std::next(node_it); later != list.end(); ++later) {
			if(later->op == id) continue;
			++m_comparisons;
			if(!conflict(node_it->acc, later->acc)) continue;
			auto& succ = m_ops.at(later->op);
			if(succ.counter <= 0) throw invariant_violation(fmt::format("counter underflow on operation {}", later->op));
			if(--succ.counter == 0) {
				make_ready(later->op, succ);
				promoted.push_back(later->op);
			}
		}
		list.erase(node_it);
		if(list.empty()) m_lists.erase(key);
	}
	m_ops.erase(it);
	return promoted;
}

bool dependency_system::has_ready(rank_t rank, op_class cls) const {
	const auto it = m_ready.find({rank, static_cast<int>(cls)});
	return it != m_ready.end() && !it->second.empty();
}

std::size_t dependency_system::ready_count(rank_t rank, op_class cls) const {
	const auto it = m_ready.find({rank, static_cast<int>(cls)});
	return it == m_ready.end() ? 0 : it->second.size();
}

std::vector<op_id> dependency_system::ready_ops(rank_t rank, op_class cls) const {
	const auto it = m_ready.find({rank, static_cast<int>(cls)});
	if(it == m_ready.end()) return {};
	return {it->second.begin(), it->second.end()};
}

std::vector<op_id> dependency_system::ready_ops(op_class cls) const {
	std::vector<op_id> out;
	for(const auto& [key, q] : m_ready) {
		if(key.second == static_cast<int>(cls)) out.insert(out.end(), q.begin(), q.end());
	}
	return out;
}

op_id dependency_system::take_ready(rank_t rank, op_class cls) {
	auto& q = queue(rank, cls);
	if(q.empty()) throw invariant_violation("take_ready on an empty queue");
	const auto id = q.front();
	q.pop_front();
	m_ops.at(id).state = op_state::executing;
	return id;
}

void dependency_system::take(op_id id) {
	auto& rec = m_ops.at(id);
	if(rec.state != op_state::ready) throw invariant_violation(fmt::format("operation {} is not ready (counter {})", id, rec.counter));
	auto& q = queue(rec.rank, rec.cls);
	if(!q.empty() && q.front() == id) {
		q.pop_front();
	} else {
		q.erase(std::find(q.begin(), q.end(), id));
	}
	rec.state = op_state::executing;
}

int dependency_system::counter(op_id id) const { return m_ops.at(id).counter; }
dependency_system::op_state dependency_system::state(op_id id) const { return m_ops.at(id).state; }
rank_t dependency_system::rank_of(op_id id) const { return m_ops.at(id).rank; }
op_class dependency_system::class_of(op_id id) const { return m_ops.at(id).cls; }

std::vector<op_id> dependency_system::live_ops() const {
	std::vector<op_id> ids;
	ids.reserve(m_ops.size());
	for(const auto& [id, rec] : m_ops) {
		ids.push_back(id);
	}
	std::sort(ids.begin(), ids.end());
	return ids;
}

std::set<rank_t> dependency_system::ranks() const {
	std::set<rank_t> out;
	for(const auto& [id, rec] : m_ops) {
		out.insert(rec.rank);
	}
	return out;
}

void dependency_system::check_ready_completeness() const {
	std::size_t queued = 0;
	for(const auto& [key, q] : m_ready) {
		for(const auto id : q) {
			const auto it = m_ops.find(id);
			if(it == m_ops.end() || it->second.state != op_state::ready || it->second.counter != 0) {
				throw invariant_violation(fmt::format("operation {} is queued but not ready", id));
			}
			if(it->second.rank != key.first || static_cast<int>(it->second.cls) != key.second) {
				throw invariant_violation(fmt::format("operation {} is in the wrong ready queue", id));
			}
		}
		queued += q.size();
	}
	std::size_t ready = 0;
	for(const auto& [id, rec] : m_ops) {
		if(rec.counter < 0) throw invariant_violation(fmt::format("operation {} has negative counter", id));
		if(rec.counter == 0 && rec.state == op_state::waiting) {
			throw invariant_violation(fmt::format("operation {} has counter 0 but is not in the ready queue", id));
		}
		if(rec.counter != 0 && rec.state != op_state::waiting) {
			throw invariant_violation(fmt::format("operation {} is runnable with counter {}", id, rec.counter));
		}
		if(rec.state == op_state::ready) ++ready;
	}
	if(ready != queued) throw invariant_violation("ready queue size does not match ready operations");
}

std::string dependency_system::dump() const {
	std::map<block_key, const node_list*> sorted;
	for(const auto& [key, list] : m_lists) {
		sorted.emplace(key, &list);
	}
	std::string out;
	for(const auto& [key, list] : sorted) {
		out += fmt::format("block {}\n", to_string(key));
		for(const auto& node : *list) {
			out += fmt::format("  op={} {} {}\n", node.op, node.acc.mode == access_mode::read ? "R" : "W", to_string(node.acc.range));
		}
	}
	return out;
}

} // namespace lazydist
