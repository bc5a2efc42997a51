#pragma once

#include <gtest/gtest.h>

#include <string>

#include "revcat/error.hpp"
#include "revcat/io.hpp"

namespace revcat::testing {

inline Rational R(const char* text) { return parse_rational(text); }

inline std::string data_path(const std::string& name) { return std::string(REVCAT_TEST_DATA) + "/" + name; }

inline RawDataset load_raw(const std::string& name) { return io::parse_dataset(io::read_json_file(data_path(name))); }

inline StochasticChoice load(const std::string& name) { return validate(load_raw(name)); }

inline StochasticChoice load_partial(const std::string& name) { return validate_partial(load_raw(name)); }

}  // namespace revcat::testing

#define EXPECT_ERROR_CODE(statement, expected)                                 \
  do {                                                                         \
    try {                                                                      \
      statement;                                                               \
      ADD_FAILURE() << "expected " << ::revcat::to_string(expected);           \
    } catch (const ::revcat::Error& error) {                                   \
      EXPECT_EQ(error.code(), expected) << error.what();                       \
    }                                                                          \
  } while (false)
