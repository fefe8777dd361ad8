#ifndef LOVESIM_TRACE_IO_HPP
#define LOVESIM_TRACE_IO_HPP

#include <iosfwd>
#include <string>

#include "lovesim/functionals.hpp"

namespace lovesim {

inline constexpr const char* kTraceHeader =
    "t,E,J,I,phi,xi,L,mu_tail,mu_prime_tail,kin,kin_grad,lp_grad,lp_val,"
    "dE_dt,bound_rhs";

/// Round-trip decimal formatting: re-parsing reproduces the doubles exactly.
void write_trace(std::ostream& os, const Trace& trace);
void write_trace_file(const std::string& path, const Trace& trace);
Trace read_trace(std::istream& is);
Trace read_trace_file(const std::string& path);

}  // namespace lovesim

#endif
