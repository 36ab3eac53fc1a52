#pragma once

#include <string>

#include <doctest.h>

#include "twinloop/common/error.hpp"

// Expects `expr` to throw twinloop::Error with the given code.
#define CHECK_ERROR_CODE(expr, expected)                                    \
  do {                                                                      \
    bool thrown_ = false;                                                   \
    try {                                                                   \
      (void)(expr);                                                         \
    } catch (const twinloop::Error& e_) {                                   \
      thrown_ = true;                                                       \
      CHECK_MESSAGE(e_.code() == (expected), "got ", std::string(twinloop::to_string(e_.code())), ": ", std::string(e_.what())); \
    }                                                                       \
    CHECK_MESSAGE(thrown_, "no error thrown, expected ", std::string(twinloop::to_string(expected))); \
  } while (0)
