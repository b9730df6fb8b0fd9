#include "ersr/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ersr {
namespace {

constexpr double kBceClip = 1e-7;
constexpr double kDiceSmooth = 1.0;

void check_shape(const FloatGrid& a, const FloatGrid& b, const char* where) {
    if (!a.same_shape(b))
        throw Error(std::string(where) + ": dimension mismatch " + std::to_string(a.height) + "x" +
                    std::to_string(a.width) + " vs " + std::to_string(b.height) + "x" +
                    std::to_string(b.width));
}

} // namespace

double mse(const FloatGrid& a, const FloatGrid& b) {
    check_shape(a, b, "mse");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        sum += d * d;
    }
    return sum / static_cast<double>(a.data.size());
}

double aug_consistency(const FloatGrid& p_o1, const FloatGrid& p_s1, const FloatGrid& p_o2,
                       const FloatGrid& p_s2) {
    return mse(p_o1, p_s1) + mse(p_o2, p_s2);
}

double sym_consistency(const FloatGrid& ps1_1, const FloatGrid& ps1_2, const FloatGrid& ps2_1,
                       const FloatGrid& ps2_2) {
    return mse(ps1_1, ps1_2) + mse(ps2_1, ps2_2);
}

double ori_consistency(const FloatGrid& p_o, const FloatGrid& p_re) {
    return mse(p_o, p_re);
}

double supervised_loss(const FloatGrid& pred, const BinaryMask& gt, double w_dice, double w_bce) {
    if (pred.height != gt.height || pred.width != gt.width)
        throw Error("supervised_loss: dimension mismatch");
    double inter = 0.0, psum = 0.0, gsum = 0.0, bce = 0.0;
    for (std::size_t i = 0; i < pred.data.size(); ++i) {
        const double p = pred.data[i];
        const double g = gt.data[i];
        inter += p * g;
        psum += p;
        gsum += g;
        const double pc = std::clamp(p, kBceClip, 1.0 - kBceClip);
        bce -= g * std::log(pc) + (1.0 - g) * std::log(1.0 - pc);
    }
    bce /= static_cast<double>(pred.data.size());
    const double dice = (2.0 * inter + kDiceSmooth) / (psum + gsum + kDiceSmooth);
    return w_dice * (1.0 - dice) + w_bce * bce;
}

LossReport total_loss(double l_sup, double l_ori, double l_aug, double l_sym,
                      const RampSchedule& lambda_schedule, double t) {
    LossReport r;
    r.l_sup = l_sup;
    r.l_ori = l_ori;
    r.l_aug = l_aug;
    r.l_sym = l_sym;
    r.lambda_t = lambda_schedule.value(t);
    r.l_total = l_sup + r.lambda_t * (l_ori + l_aug + l_sym);
    return r;
}

std::vector<double> ema_update(std::span<const double> teacher, std::span<const double> student,
                               double momentum) {
    if (teacher.size() != student.size())
        throw Error("ema_update: parameter length mismatch " + std::to_string(teacher.size()) +
                    " vs " + std::to_string(student.size()));
    std::vector<double> out(teacher.size());
    for (std::size_t i = 0; i < teacher.size(); ++i)
        out[i] = momentum * teacher[i] + (1.0 - momentum) * student[i];
    return out;
}

} // namespace ersr
