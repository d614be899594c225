#pragma once

#include <string>

#include "doctest.h"

#include "kdaco/error.hpp"

// Code of the kdaco::Error thrown by f; fails the test if nothing is thrown.
template <typename F>
kdaco::Errc error_code(F&& f) {
  try {
    f();
  } catch (const kdaco::Error& e) {
    return e.code();
  }
  FAIL("expected a kdaco::Error");
  return kdaco::Errc::ParseError;
}
