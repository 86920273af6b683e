#pragma once

#include <stdexcept>
#include <string>

namespace tbl {

// Requested truncation accuracy would need a window beyond the configured cap.
class resource_limit_error : public std::runtime_error {
 public:
  explicit resource_limit_error(const std::string& what) : std::runtime_error(what) {}
};

// A ratio or solve against a determinant that sits at (or below) its error floor.
class degenerate_determinant_error : public std::runtime_error {
 public:
  explicit degenerate_determinant_error(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation requested exactly on a lattice pole; use the residue accessor instead.
class pole_evaluation_error : public std::runtime_error {
 public:
  explicit pole_evaluation_error(const std::string& what) : std::runtime_error(what) {}
};

// Bad user-facing configuration (CLI flags, JSON profiles, ranges).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Two independent evaluation routes disagreed beyond their certified errors.
class consistency_error : public std::logic_error {
 public:
  explicit consistency_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace tbl
