#pragma once

// Translation of programs into standalone C++ sources.

#include <string>

#include "fomc/algebra.hpp"

namespace fomc {

// Name of the runtime header emitted sources include.
inline constexpr const char* kRuntimeHeader = "fomc_runtime.hpp";
inline constexpr int kRuntimeVersion = 1;

// A C++ program that reads the entry function's arguments from the command
// line and prints the count. Throws Error for a program with a function that
// lacks exactly one general definition.
std::string emit_program(const Program& program);

}  // namespace fomc
