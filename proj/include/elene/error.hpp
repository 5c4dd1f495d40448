#if !defined(ELENE_ERROR_HPP)
#define ELENE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace elene {

// Failure classes surfaced by the library. The CLI maps these onto exit
// codes: parse_error -> 1, everything else -> 2.
enum class errc {
  out_of_range,
  self_loop,
  duplicate_edge,
  not_a_bijection,
  invalid_params,
  generation_failure,
  not_an_edge,
  out_of_layout,
  invalid_delta,
  shape_mismatch,
  no_forward_cache,
  not_strongly_regular,
  parse_error,
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace elene

#endif
