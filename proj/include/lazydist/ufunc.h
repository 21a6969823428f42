#pragma once

#include "lazydist/types.h"

#include <functional>
#include <memory>
#include <span>
#include <string>

namespace lazydist {

/// An elementwise function of `arity` scalar inputs. Both element kinds get their own kernel so
/// integer arithmetic stays exact.
struct ufunc_spec {
	std::string name;
	int arity = 0;
	std::function<double(std::span<const double>)> f64;
	std::function<std::int64_t(std::span<const std::int64_t>)> i64;
};

using ufunc_ptr = std::shared_ptr<const ufunc_spec>;

/// Standard kernels. Integer arithmetic wraps modulo 2^64.
namespace ufuncs {
	ufunc_ptr identity();
	ufunc_ptr add();
	ufunc_ptr subtract();
	ufunc_ptr multiply();
	ufunc_ptr divide();
	ufunc_ptr absolute();
} // namespace ufuncs

} // namespace lazydist
