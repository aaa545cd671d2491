#pragma once

#include <vector>

#include "qneuron/qlinalg.hpp"

namespace qneuron {

enum class task_kind { classification, regression };

struct labeled_dataset {
    std::vector<cmat> states;
    std::vector<double> labels;
    task_kind task = task_kind::regression;

    int size() const { return static_cast<int>(states.size()); }
};

// Throws config_error on shape or label-domain violations.
void validate_dataset(const labeled_dataset& ds);

}  // namespace qneuron
