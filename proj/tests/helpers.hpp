#pragma once

#include <functional>
#include <string>

#include "doctest.h"
#include "wqload/error.hpp"

// Runs fn and checks that it throws wqload::Error with the given code.
inline void check_error_code(const std::function<void()>& fn, const std::string& code)
{
    try {
        fn();
        FAIL("expected error " << code);
    } catch (const wqload::Error& e) {
        CHECK(e.code() == code);
    }
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }
