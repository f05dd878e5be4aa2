#pragma once

#include <cstdint>
#include <string>

#include "hetgcn/model.hpp"

namespace hetgcn {

struct AdamWHyper {
    double lr = 2e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;
};

void validate_hyper(const AdamWHyper& hyper);

// First/second-moment buffers matching the parameter layout, plus the step count.
struct AdamWState {
    ModelParams m;
    ModelParams v;
    std::int64_t t = 0;
};

AdamWState init_adamw_state(const ModelParams& params);

// One decoupled-weight-decay Adam step:
//   m <- b1*m + (1-b1)*g;  v <- b2*v + (1-b2)*g^2
//   theta <- theta - lr*(mhat/(sqrt(vhat)+eps) + wd*theta)
// Decay applies to every weight matrix but not the head bias. Non-finite
// gradients raise NumericError naming the parameter.
void adamw_step(ModelParams& params, const ModelGrads& grads, AdamWState& state, const AdamWHyper& hyper);

}  // namespace hetgcn
