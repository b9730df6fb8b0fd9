#pragma once

#include <span>
#include <vector>

#include "ersr/dsaf.hpp"
#include "ersr/raster.hpp"

namespace ersr {

/// Mean over all pixels of (a-b)^2. Throws Error on dimension mismatch.
double mse(const FloatGrid& a, const FloatGrid& b);

/// MSE(p_o1, p_s1) + MSE(p_o2, p_s2).
double aug_consistency(const FloatGrid& p_o1, const FloatGrid& p_s1, const FloatGrid& p_o2,
                       const FloatGrid& p_s2);

/// MSE(p_s1_1, p_s1_2) + MSE(p_s2_1, p_s2_2).
double sym_consistency(const FloatGrid& ps1_1, const FloatGrid& ps1_2, const FloatGrid& ps2_1,
                       const FloatGrid& ps2_2);

/// MSE between the original prediction and the refined pseudo-label.
double ori_consistency(const FloatGrid& p_o, const FloatGrid& p_re);

/// w_dice * (1 - soft Dice) + w_bce * BCE, soft Dice with smoothing 1.0 in
/// numerator and denominator, BCE probabilities clipped to [1e-7, 1-1e-7].
double supervised_loss(const FloatGrid& pred, const BinaryMask& gt, double w_dice, double w_bce);

/// The five loss terms plus the ramp weight for one pipeline step.
/// l_total = l_sup + lambda_t * (l_ori + l_aug + l_sym).
struct LossReport {
    double l_aug = 0.0;
    double l_sym = 0.0;
    double l_ori = 0.0;
    double l_sup = 0.0;
    double lambda_t = 0.0;
    double l_total = 0.0;
};

LossReport total_loss(double l_sup, double l_ori, double l_aug, double l_sym,
                      const RampSchedule& lambda_schedule, double t);

/// out_i = momentum * teacher_i + (1 - momentum) * student_i.
std::vector<double> ema_update(std::span<const double> teacher, std::span<const double> student,
                               double momentum);

} // namespace ersr
