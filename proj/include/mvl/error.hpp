#pragma once

#include <stdexcept>
#include <string>

namespace mvl
{

/// Base class of every exception thrown by the library.
class error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A logic value outside the range of the port or type that received it.
class range_error : public error
{
public:
  using error::error;
};

/// Operation applied to a netlist or dot matrix that violates its precondition.
class netlist_error : public error
{
public:
  using error::error;
};

/// Cost or timing library lacks an entry, or cannot be solved.
class library_error : public error
{
public:
  using error::error;
};

/// Malformed netlist JSON or library config text.
class format_error : public error
{
public:
  using error::error;
};

} // namespace mvl
