#pragma once

#include <complex>
#include <numbers>

#include <doctest.h>

#include "emitcorr/core.hpp"
#include "emitcorr/error.hpp"

#define CHECK_THROWS_KIND(expr, expected_kind)                                                  \
    do {                                                                                        \
        bool thrown_ = false;                                                                   \
        try {                                                                                   \
            (void)(expr);                                                                       \
        } catch (const emitcorr::Error& e) {                                                    \
            thrown_ = true;                                                                     \
            CHECK_MESSAGE(e.kind() == (expected_kind), "got kind ", emitcorr::to_string(e.kind())); \
        }                                                                                       \
        CHECK_MESSAGE(thrown_, "expected an emitcorr::Error");                                  \
    } while (0)

namespace testing {

inline constexpr double pi = std::numbers::pi;

inline emitcorr::Matrix4c bell_plus() {
    emitcorr::Vector4c v(0.0, 1.0, 1.0, 0.0);
    v /= std::sqrt(2.0);
    return v * v.adjoint();
}

inline double max_abs(const emitcorr::Matrix4c& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace testing
