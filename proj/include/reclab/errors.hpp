#ifndef RECLAB_ERRORS_HPP
#define RECLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace reclab {

/// Node doubling stopped at the maximum node count without the two latest
/// estimates agreeing. Carries both so the caller can see how far apart
/// they ended up.
class quadrature_error : public std::runtime_error {
public:
    quadrature_error(const std::string& what, double previous, double last)
        : std::runtime_error(what), previous_estimate(previous), last_estimate(last) {}

    double previous_estimate;
    double last_estimate;
};

/// The naive record sampler exhausted its iid-draw budget before reaching
/// the requested record count. Retrying with the same seed and a larger
/// budget continues the identical draw stream.
class budget_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace reclab

#endif // RECLAB_ERRORS_HPP
