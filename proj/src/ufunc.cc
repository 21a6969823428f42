#include "lazydist/ufunc.h"

#include <cmath>

namespace lazydist::ufuncs {

namespace {

std::int64_t wrap(std::uint64_t v) { return static_cast<std::int64_t>(v); }

ufunc_ptr make(std::string name, int arity, std::function<double(std::span<const double>)> f64,
    std::function<std::int64_t(std::span<const std::int64_t>)> i64) {
	return std::make_shared<const ufunc_spec>(ufunc_spec{std::move(name), arity, std::move(f64), std::move(i64)});
}

} // namespace

ufunc_ptr identity() {
	static const auto spec = make("identity", 1, [](std::span<const double> x) { return x[0]; }, [](std::span<const std::int64_t> x) { return x[0]; });
	return spec;
}

ufunc_ptr add() {
	static const auto spec = make(
	    "add", 2, [](std::span<const double> x) { return x[0] + x[1]; },
	    [](std::span<const std::int64_t> x) { return wrap(static_cast<std::uint64_t>(x[0]) + static_cast<std::uint64_t>(x[1])); });
	return spec;
}

ufunc_ptr subtract() {
	static const auto spec = make(
	    "subtract", 2, [](std::span<const double> x) { return x[0] - x[1]; },
	    [](std::span<const std::int64_t> x) { return wrap(static_cast<std::uint64_t>(x[0]) - static_cast<std::uint64_t>(x[1])); });
	return spec;
}

ufunc_ptr multiply() {
	static const auto spec = make(
	    "multiply", 2, [](std::span<const double> x) { return x[0] * x[1]; },
	    [](std::span<const std::int64_t> x) { return wrap(static_cast<std::uint64_t>(x[0]) * static_cast<std::uint64_t>(x[1])); });
	return spec;
}

ufunc_ptr divide() {
	// Integer division by zero yields zero rather than trapping.
	static const auto spec = make(
	    "divide", 2, [](std::span<const double> x) { return x[0] / x[1]; },
	    [](std::span<const std::int64_t> x) -> std::int64_t {
		    if(x[1] == 0 || (x[1] == -1 && x[0] == INT64_MIN)) return 0;
		    return x[0] / x[1];
	    });
	return spec;
}

ufunc_ptr absolute() {
	static const auto spec = make(
	    "absolute", 1, [](std::span<const double> x) { return std::fabs(x[0]); },
	    [](std::span<const std::int64_t> x) { return x[0] < 0 ? wrap(0 - static_cast<std::uint64_t>(x[0])) : x[0]; });
	return spec;
}

} // namespace lazydist::ufuncs
