#include "lazydist/runtime.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

namespace lazydist {

double run_metrics::total_wait() const { return std::accumulate(wait.begin(), wait.end(), 0.0); }

double run_metrics::total_compute() const { return std::accumulate(compute.begin(), compute.end(), 0.0); }

double run_metrics::wait_fraction() const {
	if(makespan <= 0 || nprocs <= 0) return 0;
	return total_wait() / (makespan * nprocs);
}

namespace {

std::uint64_t to_word(const scalar& s, dtype t) {
	if(t == dtype::f64) {
		const double v = std::holds_alternative<double>(s) ? std::get<double>(s) : static_cast<double>(std::get<std::int64_t>(s));
		return std::bit_cast<std::uint64_t>(v);
	}
	if(!std::holds_alternative<std::int64_t>(s)) throw std::invalid_argument("floating-point value given for an integer array");
	return static_cast<std::uint64_t>(std::get<std::int64_t>(s));
}

region full_region(const coords& extents) {
	region r;
	for(const auto e : extents) {
		r.push_back(make_slice(0, e, 1));
	}
	return r;
}

/// Base-block coordinate holding view index `v` of dimension `d`.
index_t block_of(const array_view& view, std::size_t d, index_t v) {
	const auto& s = view.slices()[d];
	return (s.start + v * s.step) / view.base().block_size()[d];
}

/// Block-local range of the view indices [v, v + n) of dimension `d`, which must lie in one base-block.
slice local_slice(const array_view& view, std::size_t d, index_t v, index_t n) {
	const auto& s = view.slices()[d];
	const auto b = s.start + v * s.step;
	const auto bs = view.base().block_size()[d];
	return make_slice(b - (b / bs) * bs, n, s.step);
}

block_key base_key(const array_view& view, const coords& block) { return block_key{view.base().id(), view.base().block_index(block)}; }

enum class slot_kind { scalar_value, base, fetched };

struct cell_input {
	slot_kind kind = slot_kind::base;
	std::size_t operand = 0; ///< index into the ufunc inputs
	coords block;            ///< base-block of the operand (base/fetched)
	region local;            ///< range in that base-block
	std::size_t group = 0;   ///< fetch group (fetched)
};

struct cell {
	coords origin, counts;
	rank_t exec = 0;
	coords out_block;
	region out_local;
	bool write_back = false;
	std::size_t wb_group = 0;
	std::vector<cell_input> ins;
};

/// Elements moved between two ranks for one ufunc: a rectangle of the view index space that lies in
/// a single base-block of one operand.
struct transfer_group {
	std::size_t operand = 0; ///< index into ufunc inputs, or unused for write-back
	coords block;
	rank_t from = 0, to = 0;
	coords lo, hi;
	index_t staging = 0;

	void cover(const coords& origin, const coords& counts) {
		if(lo.empty()) {
			lo = origin;
			for(std::size_t d = 0; d < origin.size(); ++d) {
				hi.push_back(origin[d] + counts[d]);
			}
			return;
		}
		for(std::size_t d = 0; d < origin.size(); ++d) {
			lo[d] = std::min(lo[d], origin[d]);
			hi[d] = std::max(hi[d], origin[d] + counts[d]);
		}
	}

	coords extents() const {
		coords e;
		for(std::size_t d = 0; d < lo.size(); ++d) {
			e.push_back(hi[d] - lo[d]);
		}
		return e;
	}

	region staged(const coords& origin, const coords& counts) const {
		region r;
		for(std::size_t d = 0; d < lo.size(); ++d) {
			r.push_back(make_slice(origin[d] - lo[d], counts[d], 1));
		}
		return r;
	}
};

region view_local(const array_view& view, const coords& origin, const coords& counts) {
	region r;
	for(std::size_t d = 0; d < origin.size(); ++d) {
		r.push_back(local_slice(view, d, origin[d], counts[d]));
	}
	return r;
}

coords view_block_coords(const array_view& view, const coords& origin) {
	coords b;
	for(std::size_t d = 0; d < origin.size(); ++d) {
		b.push_back(block_of(view, d, origin[d]));
	}
	return b;
}

/// Per-dimension cut points of [origin, origin + extent) where any of `views` crosses a base-block boundary.
std::vector<std::vector<std::pair<index_t, index_t>>> refine(const std::vector<const array_view*>& views, const coords& origin, const coords& extent) {
	std::vector<std::vector<std::pair<index_t, index_t>>> intervals(origin.size());
	for(std::size_t d = 0; d < origin.size(); ++d) {
		std::set<index_t> cuts{origin[d] + extent[d]};
		for(const auto* v : views) {
			for(const auto& p : dim_pieces(*v, d, origin[d], origin[d] + extent[d])) {
				cuts.insert(p.view_offset);
			}
		}
		index_t prev = origin[d];
		for(const auto c : cuts) {
			if(c == prev) continue;
			intervals[d].emplace_back(prev, c - prev);
			prev = c;
		}
	}
	return intervals;
}

} // namespace

runtime::runtime(runtime_config cfg)
    : m_cfg(cfg), m_net(cfg.nprocs, cfg.model), m_stores(static_cast<std::size_t>(std::max(cfg.nprocs, 1))) {
	if(cfg.nprocs < 1) throw std::invalid_argument("runtime needs at least one rank");
	m_program.threshold = cfg.flush_threshold;
	m_log.set_enabled(cfg.log_enabled);
}

void runtime::check_view(const array_view& v) const {
	if(!v.valid()) throw std::invalid_argument("invalid array view");
	const auto it = m_arrays.find(v.base().id());
	if(it == m_arrays.end() || it->second.get() != &v.base()) throw std::invalid_argument("array view does not belong to this runtime");
}

void runtime::emit(node_spec spec) {
	const auto id = m_next_op++;
	const auto cls = class_of(spec.kind);
	if(m_cfg.mode == flush_mode::dag_blocking) {
		m_dag.insert(id, spec.rank, cls, spec.accesses);
	} else {
		m_deps.insert(id, spec.rank, cls, spec.accesses);
	}
	m_program.nodes.push_back(recorded_op{id, spec.rank, spec.kind, std::move(spec.payload), std::move(spec.accesses)});
	++m_total_nodes;
}

index_t runtime::allocate_staging(rank_t rank, coords extents) {
	const auto id = m_next_staging++;
	m_staging.emplace(id, std::pair{rank, std::move(extents)});
	return id;
}

array_view runtime::create_array(coords shape, coords block_size, dtype type, const std::vector<scalar>& values) {
	auto base = create_distributed_array(m_next_array++, std::move(shape), std::move(block_size), m_cfg.nprocs, type);
	const auto total = product(base->shape());
	if(!values.empty() && static_cast<index_t>(values.size()) != total) {
		throw std::invalid_argument(fmt::format("{} initial values given for an array of {} elements", values.size(), total));
	}
	m_arrays.emplace(base->id(), base);
	const auto nd = base->ndim();
	for(index_t b = 0; b < base->num_blocks(); ++b) {
		const auto bc = base->block_coords(b);
		const auto ext = base->block_extent(bc);
		fill_payload fill{block_key{base->id(), b}, std::vector<std::uint64_t>(static_cast<std::size_t>(product(ext)), 0)};
		if(!values.empty()) {
			region global;
			for(std::size_t d = 0; d < nd; ++d) {
				global.push_back(make_slice(bc[d] * base->block_size()[d], ext[d], 1));
			}
			std::size_t k = 0;
			for_each_offset(base->shape(), global, [&](index_t off) { fill.words[k++] = to_word(values[static_cast<std::size_t>(off)], type); });
		} else if(type == dtype::f64) {
			std::fill(fill.words.begin(), fill.words.end(), std::bit_cast<std::uint64_t>(0.0));
		}
		const auto rank = base->owner_of_index(b);
		std::vector<access> acc{access{fill.block, full_region(ext), access_mode::write}};
		emit(node_spec{rank, op_kind::fill, std::move(fill), std::move(acc)});
	}
	++m_program.delayed_ops;
	maybe_autoflush();
	return array_view(base);
}

void runtime::record_copy(const array_view& out, const array_view& in) { record_ufunc(ufuncs::identity(), out, {in}); }

void runtime::record_ufunc(const ufunc_ptr& spec, const array_view& out, const std::vector<operand>& ins) {
	if(!spec) throw std::invalid_argument("null ufunc");
	if(spec->arity != static_cast<int>(ins.size())) {
		throw std::invalid_argument(fmt::format("ufunc {} takes {} operand(s), {} given", spec->name, spec->arity, ins.size()));
	}
	check_view(out);
	const auto type = out.base().type();
	const auto ext = out.extent();
	std::vector<const array_view*> views{&out};
	bool self_copy = spec == ufuncs::identity();
	for(const auto& op : ins) {
		if(const auto* s = std::get_if<scalar>(&op)) {
			self_copy = false;
			if(type == dtype::i64 && !std::holds_alternative<std::int64_t>(*s)) throw std::invalid_argument("floating-point scalar for an integer ufunc");
			continue;
		}
		const auto& v = std::get<array_view>(op);
		check_view(v);
		if(v.extent() != ext) throw std::invalid_argument(fmt::format("operand extent {} does not match output extent {}", to_string(v.slices()), to_string(out.slices())));
		if(v.base().type() != type) throw std::invalid_argument("operand element kind does not match the output");
		if(&v.base() == &out.base()) {
			if(!v.same_selection(out) && regions_intersect(v.slices(), out.slices())) {
				throw std::invalid_argument("an input partially overlaps the output");
			}
		}
		if(!(&v.base() == &out.base() && v.same_selection(out))) self_copy = false;
		views.push_back(&v);
	}
	++m_program.delayed_ops;
	if(out.size() == 0 || self_copy) {
		maybe_autoflush();
		return;
	}

	const auto nd = out.ndim();
	const auto& out_base = out.base();
	std::vector<node_spec> fetch_sends, fetch_recvs, computes, wb_sends, wb_recvs;

	for(const auto& vb : decompose(out)) {
		const auto intervals = refine(views, vb.origin, vb.extent);
		const auto vbf_rank = owner_of(out_base, view_block_coords(out, vb.origin));

		std::vector<transfer_group> fetches, writebacks;
		std::map<std::tuple<index_t, std::size_t, index_t>, std::size_t> fetch_index;
		std::map<index_t, std::size_t> wb_index;
		std::vector<cell> cells;

		coords pos(nd, 0);
		while(true) {
			cell c;
			for(std::size_t d = 0; d < nd; ++d) {
				c.origin.push_back(intervals[d][static_cast<std::size_t>(pos[d])].first);
				c.counts.push_back(intervals[d][static_cast<std::size_t>(pos[d])].second);
			}
			c.out_block = view_block_coords(out, c.origin);
			c.out_local = view_local(out, c.origin, c.counts);
			const auto out_idx = out_base.block_index(c.out_block);
			const auto out_owner = out_base.owner_of_index(out_idx);
			c.exec = m_cfg.policy == exec_policy::output_owner ? out_owner : vbf_rank;
			if(out_owner != c.exec) {
				c.write_back = true;
				auto [it, fresh] = wb_index.try_emplace(out_idx, writebacks.size());
				if(fresh) writebacks.push_back(transfer_group{0, c.out_block, c.exec, out_owner, {}, {}, 0});
				writebacks[it->second].cover(c.origin, c.counts);
				c.wb_group = it->second;
			}
			const auto group_key = m_cfg.policy == exec_policy::output_owner ? out_idx : index_t{-1};
			for(std::size_t k = 0; k < ins.size(); ++k) {
				cell_input in;
				in.operand = k;
				const auto* v = std::get_if<array_view>(&ins[k]);
				if(v == nullptr) {
					in.kind = slot_kind::scalar_value;
					c.ins.push_back(std::move(in));
					continue;
				}
				in.block = view_block_coords(*v, c.origin);
				in.local = view_local(*v, c.origin, c.counts);
				const auto in_idx = v->base().block_index(in.block);
				const auto in_owner = v->base().owner_of_index(in_idx);
				if(in_owner == c.exec) {
					in.kind = slot_kind::base;
				} else {
					in.kind = slot_kind::fetched;
					auto [it, fresh] = fetch_index.try_emplace({group_key, k, in_idx}, fetches.size());
					if(fresh) fetches.push_back(transfer_group{k, in.block, in_owner, c.exec, {}, {}, 0});
					fetches[it->second].cover(c.origin, c.counts);
					in.group = it->second;
				}
				c.ins.push_back(std::move(in));
			}
			cells.push_back(std::move(c));

			std::size_t d = nd;
			bool done = true;
			while(d > 0) {
				--d;
				if(++pos[d] < static_cast<index_t>(intervals[d].size())) {
					done = false;
					break;
				}
				pos[d] = 0;
			}
			if(done) break;
		}

		for(auto& g : fetches) {
			const auto& v = std::get<array_view>(ins[g.operand]);
			g.staging = allocate_staging(g.to, g.extents());
			const block_key src{v.base().id(), v.base().block_index(g.block)};
			const auto src_range = view_local(v, g.lo, g.extents());
			const message_tag tag{static_cast<std::uint64_t>(g.staging), v.base().id(), src.index, src_range};
			const auto dst = staging_key(g.staging);
			const auto dst_range = full_region(g.extents());
			fetch_sends.push_back(node_spec{g.from, op_kind::send, send_payload{g.to, tag, buffer_ref{src, src_range}}, {access{src, src_range, access_mode::read}}});
			fetch_recvs.push_back(node_spec{g.to, op_kind::recv, recv_payload{g.from, tag, buffer_ref{dst, dst_range}}, {access{dst, dst_range, access_mode::write}}});
		}
		for(auto& g : writebacks) {
			g.staging = allocate_staging(g.from, g.extents());
			const auto src = staging_key(g.staging);
			const auto src_range = full_region(g.extents());
			const block_key dst{out_base.id(), out_base.block_index(g.block)};
			const auto dst_range = view_local(out, g.lo, g.extents());
			const message_tag tag{static_cast<std::uint64_t>(g.staging), out_base.id(), dst.index, dst_range};
			wb_sends.push_back(node_spec{g.from, op_kind::send, send_payload{g.to, tag, buffer_ref{src, src_range}}, {access{src, src_range, access_mode::read}}});
			wb_recvs.push_back(node_spec{g.to, op_kind::recv, recv_payload{g.from, tag, buffer_ref{dst, dst_range}}, {access{dst, dst_range, access_mode::write}}});
		}

		for(const auto& c : cells) {
			compute_payload p;
			p.spec = spec;
			p.type = type;
			std::vector<access> acc;
			if(c.write_back) {
				const auto& g = writebacks[c.wb_group];
				p.out = buffer_ref{staging_key(g.staging), g.staged(c.origin, c.counts)};
			} else {
				p.out = buffer_ref{base_key(out, c.out_block), c.out_local};
			}
			acc.push_back(access{p.out.block, p.out.range, access_mode::write});
			for(const auto& in : c.ins) {
				switch(in.kind) {
				case slot_kind::scalar_value: p.ins.emplace_back(std::get<scalar>(ins[in.operand])); break;
				case slot_kind::base: p.ins.emplace_back(buffer_ref{base_key(std::get<array_view>(ins[in.operand]), in.block), in.local}); break;
				case slot_kind::fetched: {
					const auto& g = fetches[in.group];
					p.ins.emplace_back(buffer_ref{staging_key(g.staging), g.staged(c.origin, c.counts)});
					break;
				}
				}
				if(const auto* ref = std::get_if<buffer_ref>(&p.ins.back())) acc.push_back(access{ref->block, ref->range, access_mode::read});
			}
			computes.push_back(node_spec{c.exec, op_kind::compute, std::move(p), std::move(acc)});
		}
	}

	for(auto* phase : {&fetch_sends, &fetch_recvs, &computes, &wb_sends, &wb_recvs}) {
		for(auto& n : *phase) {
			emit(std::move(n));
		}
	}
	maybe_autoflush();
}

bool runtime::maybe_autoflush() {
	if(m_program.delayed_ops < m_program.threshold) return false;
	flush();
	return true;
}

void runtime::flush() {
	if(m_program.nodes.empty()) {
		m_program.delayed_ops = 0;
		return;
	}
	if(m_cfg.mode == flush_mode::dag_blocking) {
		dag_schedule_blocking(m_dag, *this, m_net);
	} else {
		flush_options opts;
		opts.mode = m_cfg.mode;
		opts.check_invariants = m_cfg.check_invariants;
		opts.log = &m_log;
		lazydist::flush(m_deps, m_net, *this, opts);
	}
	m_program.nodes.clear();
	m_program.delayed_ops = 0;
	m_first_pending = m_next_op;
	for(const auto& [id, where] : m_staging) {
		m_stores[static_cast<std::size_t>(where.first)].erase(staging_key(id));
	}
	m_staging.clear();
	++m_flushes;
}

bsp_result runtime::naive_flush() {
	auto result = naive_bsp_flush(m_deps, m_net, *this);
	if(result.completed) {
		m_program.nodes.clear();
		m_program.delayed_ops = 0;
		m_first_pending = m_next_op;
		++m_flushes;
	}
	return result;
}

std::vector<scalar> runtime::read_elements(const array_view& view) {
	check_view(view);
	flush();
	const auto& base = view.base();
	const auto nd = view.ndim();
	std::vector<scalar> out;
	out.reserve(static_cast<std::size_t>(view.size()));
	if(view.size() == 0) return out;
	const auto counts = view.extent();
	coords idx(nd, 0);
	while(true) {
		coords block(nd), local(nd);
		for(std::size_t d = 0; d < nd; ++d) {
			const auto g = view.slices()[d].start + idx[d] * view.slices()[d].step;
			block[d] = g / base.block_size()[d];
			local[d] = g - block[d] * base.block_size()[d];
		}
		const auto b = base.block_index(block);
		const auto& buf = buffer(base.owner_of_index(b), block_key{base.id(), b});
		const auto word = buf.words.at(static_cast<std::size_t>(flatten_row_major(local, buf.extents)));
		if(base.type() == dtype::f64) {
			out.emplace_back(std::bit_cast<double>(word));
		} else {
			out.emplace_back(static_cast<std::int64_t>(word));
		}
		std::size_t d = nd;
		bool done = true;
		while(d > 0) {
			--d;
			if(++idx[d] < counts[d]) {
				done = false;
				break;
			}
			idx[d] = 0;
		}
		if(done) break;
	}
	return out;
}

std::vector<double> runtime::read_f64(const array_view& view) {
	if(view.base().type() != dtype::f64) throw std::invalid_argument("read_f64 on an integer array");
	std::vector<double> out;
	for(const auto& s : read_elements(view)) {
		out.push_back(std::get<double>(s));
	}
	return out;
}

std::vector<std::int64_t> runtime::read_i64(const array_view& view) {
	if(view.base().type() != dtype::i64) throw std::invalid_argument("read_i64 on a floating-point array");
	std::vector<std::int64_t> out;
	for(const auto& s : read_elements(view)) {
		out.push_back(std::get<std::int64_t>(s));
	}
	return out;
}

run_metrics runtime::metrics() const {
	run_metrics m;
	m.nprocs = m_cfg.nprocs;
	for(rank_t r = 0; r < m_cfg.nprocs; ++r) {
		m.wait.push_back(m_net.wait_time(r));
		m.compute.push_back(m_net.compute_time(r));
		m.idle.push_back(m_net.idle_time(r));
	}
	m.makespan = m_net.makespan();
	m.messages = m_net.stats().messages;
	m.bytes = m_net.stats().bytes;
	m.comparisons = m_cfg.mode == flush_mode::dag_blocking ? m_dag.comparison_count() : m_deps.comparison_count();
	m.flushes = m_flushes;
	m.nodes = m_total_nodes;
	return m;
}

const recorded_op& runtime::node(op_id id) const {
	if(id < m_first_pending || id >= m_next_op) throw std::out_of_range(fmt::format("operation {} is not pending", id));
	return m_program.nodes[static_cast<std::size_t>(id - m_first_pending)];
}

runtime::block_buffer& runtime::buffer(rank_t rank, const block_key& key) {
	auto& store = m_stores.at(static_cast<std::size_t>(rank));
	const auto it = store.find(key);
	if(it != store.end()) return it->second;
	coords extents;
	if(key.is_staging()) {
		const auto& [owner, ext] = m_staging.at(key.index);
		if(owner != rank) throw invariant_violation(fmt::format("staging buffer {} accessed on rank {}", key.index, rank));
		extents = ext;
	} else {
		const auto& base = *m_arrays.at(key.space);
		if(base.owner_of_index(key.index) != rank) throw invariant_violation(fmt::format("{} accessed on non-owner rank {}", to_string(key), rank));
		extents = base.block_extent(base.block_coords(key.index));
	}
	block_buffer buf{extents, std::vector<std::uint64_t>(static_cast<std::size_t>(product(extents)), 0)};
	return store.emplace(key, std::move(buf)).first->second;
}

op_kind runtime::kind_of(op_id id) const { return node(id).kind; }

rank_t runtime::rank_of(op_id id) const { return node(id).rank; }

template <typename T>
void runtime::run_compute(rank_t rank, const compute_payload& p) {
	const auto n = static_cast<std::size_t>(region_size(p.out.range));
	const auto arity = p.ins.size();
	std::vector<T> values(arity * n);
	for(std::size_t k = 0; k < arity; ++k) {
		if(const auto* s = std::get_if<scalar>(&p.ins[k])) {
			T v;
			if constexpr(std::is_same_v<T, double>) {
				v = std::holds_alternative<double>(*s) ? std::get<double>(*s) : static_cast<double>(std::get<std::int64_t>(*s));
			} else {
				v = std::get<std::int64_t>(*s);
			}
			for(std::size_t i = 0; i < n; ++i) {
				values[i * arity + k] = v;
			}
			continue;
		}
		const auto& ref = std::get<buffer_ref>(p.ins[k]);
		const auto& buf = buffer(rank, ref.block);
		std::size_t i = 0;
		for_each_offset(buf.extents, ref.range, [&](index_t off) { values[i++ * arity + k] = std::bit_cast<T>(buf.words[static_cast<std::size_t>(off)]); });
	}
	auto& out = buffer(rank, p.out.block);
	std::size_t i = 0;
	for_each_offset(out.extents, p.out.range, [&](index_t off) {
		const std::span<const T> args(values.data() + i * arity, arity);
		T r;
		if constexpr(std::is_same_v<T, double>) {
			r = p.spec->f64(args);
		} else {
			r = p.spec->i64(args);
		}
		out.words[static_cast<std::size_t>(off)] = std::bit_cast<std::uint64_t>(r);
		++i;
	});
}

index_t runtime::compute(op_id id) {
	const auto& n = node(id);
	if(const auto* fill = std::get_if<fill_payload>(&n.payload)) {
		buffer(n.rank, fill->block).words = fill->words;
		return static_cast<index_t>(fill->words.size());
	}
	const auto& p = std::get<compute_payload>(n.payload);
	if(p.type == dtype::f64) {
		run_compute<double>(n.rank, p);
	} else {
		run_compute<std::int64_t>(n.rank, p);
	}
	return region_size(p.out.range);
}

send_request runtime::make_send(op_id id) {
	const auto& n = node(id);
	const auto& p = std::get<send_payload>(n.payload);
	const auto& buf = buffer(n.rank, p.src.block);
	std::vector<std::uint64_t> words;
	words.reserve(static_cast<std::size_t>(region_size(p.src.range)));
	for_each_offset(buf.extents, p.src.range, [&](index_t off) { words.push_back(buf.words[static_cast<std::size_t>(off)]); });
	std::vector<std::byte> payload(words.size() * sizeof(std::uint64_t));
	if(!words.empty()) std::memcpy(payload.data(), words.data(), payload.size());
	return send_request{p.dst, p.tag, std::move(payload)};
}

recv_request runtime::make_recv(op_id id) {
	const auto& p = std::get<recv_payload>(node(id).payload);
	return recv_request{p.src, p.tag};
}

void runtime::deliver(op_id id, std::span<const std::byte> payload) {
	const auto& n = node(id);
	const auto& p = std::get<recv_payload>(n.payload);
	auto& buf = buffer(n.rank, p.dst.block);
	const auto count = static_cast<std::size_t>(region_size(p.dst.range));
	if(payload.size() != count * sizeof(std::uint64_t)) {
		throw invariant_violation(fmt::format("operation {} received {} bytes for {} elements", id, payload.size(), count));
	}
	std::size_t i = 0;
	for_each_offset(buf.extents, p.dst.range, [&](index_t off) {
		std::memcpy(&buf.words[static_cast<std::size_t>(off)], payload.data() + i * sizeof(std::uint64_t), sizeof(std::uint64_t));
		++i;
	});
}

std::vector<op_id> runtime::recording_order() const {
	std::vector<op_id> ids;
	ids.reserve(m_program.nodes.size());
	for(const auto& n : m_program.nodes) {
		ids.push_back(n.id);
	}
	return ids;
}

} // namespace lazydist
