#pragma once

// Adaptive moment estimation with global gradient-norm clipping.

#include <cmath>
#include <vector>

#include "dialeval/slm/model.hpp"

namespace dialeval::train {

class AdamOptimizer {
   public:
    explicit AdamOptimizer(double lr = 1e-3, double beta1 = 0.9, double beta2 = 0.999,
                           double eps = 1e-8)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    void step(const std::vector<slm::ParamRef>& params, std::vector<nn::Mat> grads,
              double clip_norm = 1.0) {
        if (params.size() != grads.size())
            throw TrainingError("optimizer: parameter/gradient count mismatch");
        if (m_.empty()) {
            for (const auto& p : params) {
                m_.push_back(nn::Mat::Zero(p.tensor->rows(), p.tensor->cols()));
                v_.push_back(nn::Mat::Zero(p.tensor->rows(), p.tensor->cols()));
            }
        }

        if (clip_norm > 0) {
            double sq = 0;
            for (const auto& g : grads) sq += g.squaredNorm();
            double norm = std::sqrt(sq);
            if (norm > clip_norm)
                for (auto& g : grads) g *= clip_norm / norm;
        }

        ++t_;
        double bc1 = 1.0 - std::pow(beta1_, t_);
        double bc2 = 1.0 - std::pow(beta2_, t_);
        for (size_t k = 0; k < params.size(); ++k) {
            m_[k] = beta1_ * m_[k] + (1 - beta1_) * grads[k];
            v_[k] = beta2_ * v_[k] + (1 - beta2_) * grads[k].cwiseProduct(grads[k]);
            nn::Mat mhat = m_[k] / bc1;
            nn::Mat vhat = v_[k] / bc2;
            *params[k].tensor -=
                lr_ * mhat.cwiseQuotient((vhat.cwiseSqrt().array() + eps_).matrix());
        }
    }

   private:
    double lr_, beta1_, beta2_, eps_;
    std::vector<nn::Mat> m_, v_;
    long t_ = 0;
};

}  // namespace dialeval::train
