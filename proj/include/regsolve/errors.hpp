#pragma once

#include <stdexcept>

namespace regsolve {

class RewriteBlowup : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotRegularError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SolverCrash : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace regsolve
