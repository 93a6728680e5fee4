#ifndef SFCR_ERRORS_HPP
#define SFCR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sfcr {

// hard precondition violations; recoverable outcomes (rejected flows,
// missing providers) are carried in result structs instead
struct dimension_mismatch : std::runtime_error {
  explicit dimension_mismatch(const std::string& what) : std::runtime_error(what) {}
};

struct malformed_q : std::runtime_error {
  explicit malformed_q(const std::string& what) : std::runtime_error(what) {}
};

struct not_a_link : std::runtime_error {
  explicit not_a_link(const std::string& what) : std::runtime_error(what) {}
};

struct rates_unknown : std::runtime_error {
  explicit rates_unknown(const std::string& what) : std::runtime_error(what) {}
};

struct bad_alpha : std::runtime_error {
  explicit bad_alpha(const std::string& what) : std::runtime_error(what) {}
};

struct uncoverable : std::runtime_error {
  explicit uncoverable(const std::string& what) : std::runtime_error(what) {}
};

struct bad_params : std::runtime_error {
  explicit bad_params(const std::string& what) : std::runtime_error(what) {}
};

struct parse_error : std::runtime_error {
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

struct io_error : std::runtime_error {
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sfcr

#endif
