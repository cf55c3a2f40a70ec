#pragma once

#include "sisctl/core.hpp"

#include <gtest/gtest.h>

#define EXPECT_SISCTL_ERROR(statement, expected_kind)                                              \
    do {                                                                                           \
        try {                                                                                      \
            statement;                                                                             \
            ADD_FAILURE() << "expected " << sisctl::to_string(expected_kind) << ", nothing thrown"; \
        } catch (const sisctl::Error& e) {                                                         \
            EXPECT_EQ(e.kind(), expected_kind) << e.what();                                        \
        }                                                                                          \
    } while (0)
