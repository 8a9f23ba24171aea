#pragma once

#include <fftw3.h>

namespace rbsim::detail {

struct FftPlans {
    explicit FftPlans(int n);
    ~FftPlans();
    FftPlans(const FftPlans&) = delete;
    FftPlans& operator=(const FftPlans&) = delete;

    int n;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

}  // namespace rbsim::detail
