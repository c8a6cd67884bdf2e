#include "swarmsqp/benchmarks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace swarmsqp {

namespace {

using std::cos;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;

using X = std::span<const double>;
using Out = std::span<double>;

constexpr double kNa = std::numeric_limits<double>::quiet_NaN();

std::optional<double> opt(double v) {
    return std::isnan(v) ? std::nullopt : std::optional<double>(v);
}

ProblemDefinition make(std::string name, Vector lower, Vector upper, std::size_t q, std::size_t m,
                       EvaluatorFn fn, double f_star) {
    ProblemDefinition p;
    p.name = std::move(name);
    p.dimension = lower.size();
    p.lower = std::move(lower);
    p.upper = std::move(upper);
    p.num_inequalities = q;
    p.num_equalities = m;
    p.evaluator = std::move(fn);
    p.f_star = opt(f_star);
    p.validate();
    return p;
}

Vector filled(std::size_t n, double v) { return Vector(n, v); }

// ---------------------------------------------------------------------------
// Problem formulas (CEC 2006 constrained suite). Indices are zero-based.
// ---------------------------------------------------------------------------

double g01(X x, Out g, Out) {
    double f = 0.0;
    for (int i = 0; i < 4; ++i) f += 5.0 * x[i] - 5.0 * x[i] * x[i];
    for (int i = 4; i < 13; ++i) f -= x[i];
    g[0] = 2 * x[0] + 2 * x[1] + x[9] + x[10] - 10;
    g[1] = 2 * x[0] + 2 * x[2] + x[9] + x[11] - 10;
    g[2] = 2 * x[1] + 2 * x[2] + x[10] + x[11] - 10;
    g[3] = -8 * x[0] + x[9];
    g[4] = -8 * x[1] + x[10];
    g[5] = -8 * x[2] + x[11];
    g[6] = -2 * x[3] - x[4] + x[9];
    g[7] = -2 * x[5] - x[6] + x[10];
    g[8] = -2 * x[7] - x[8] + x[11];
    return f;
}

double g02(X x, Out g, Out) {
    const std::size_t n = x.size();
    double sum_cos4 = 0.0;
    double prod_cos2 = 1.0;
    double weighted = 0.0;
    double prod = 1.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double c = cos(x[i]);
        sum_cos4 += pow(c, 4);
        prod_cos2 *= c * c;
        weighted += static_cast<double>(i + 1) * x[i] * x[i];
        prod *= x[i];
        sum += x[i];
    }
    g[0] = 0.75 - prod;
    g[1] = sum - 7.5 * static_cast<double>(n);
    return -std::abs((sum_cos4 - 2.0 * prod_cos2) / sqrt(weighted));
}

double g03(X x, Out, Out h) {
    const double n = static_cast<double>(x.size());
    double prod = 1.0;
    double sq = 0.0;
    for (double v : x) {
        prod *= v;
        sq += v * v;
    }
    h[0] = sq - 1.0;
    return -pow(sqrt(n), n) * prod;
}

double g04(X x, Out g, Out) {
    const double u = 85.334407 + 0.0056858 * x[1] * x[4] + 0.0006262 * x[0] * x[3] -
                     0.0022053 * x[2] * x[4];
    const double v = 80.51249 + 0.0071317 * x[1] * x[4] + 0.0029955 * x[0] * x[1] +
                     0.0021813 * x[2] * x[2];
    const double w = 9.300961 + 0.0047026 * x[2] * x[4] + 0.0012547 * x[0] * x[2] +
                     0.0019085 * x[2] * x[3];
    g[0] = -u;
    g[1] = u - 92.0;
    g[2] = 90.0 - v;
    g[3] = v - 110.0;
    g[4] = 20.0 - w;
    g[5] = w - 25.0;
    return 5.3578547 * x[2] * x[2] + 0.8356891 * x[0] * x[4] + 37.293239 * x[0] - 40792.141;
}

double g05(X x, Out g, Out h) {
    g[0] = -x[3] + x[2] - 0.55;
    g[1] = -x[2] + x[3] - 0.55;
    h[0] = 1000 * sin(-x[2] - 0.25) + 1000 * sin(-x[3] - 0.25) + 894.8 - x[0];
    h[1] = 1000 * sin(x[2] - 0.25) + 1000 * sin(x[2] - x[3] - 0.25) + 894.8 - x[1];
    h[2] = 1000 * sin(x[3] - 0.25) + 1000 * sin(x[3] - x[2] - 0.25) + 1294.8;
    return 3 * x[0] + 0.000001 * pow(x[0], 3) + 2 * x[1] + (0.000002 / 3.0) * pow(x[1], 3);
}

double g06(X x, Out g, Out) {
    g[0] = -pow(x[0] - 5, 2) - pow(x[1] - 5, 2) + 100;
    g[1] = pow(x[0] - 6, 2) + pow(x[1] - 5, 2) - 82.81;
    return pow(x[0] - 10, 3) + pow(x[1] - 20, 3);
}

double g07(X x, Out g, Out) {
    g[0] = -105 + 4 * x[0] + 5 * x[1] - 3 * x[6] + 9 * x[7];
    g[1] = 10 * x[0] - 8 * x[1] - 17 * x[6] + 2 * x[7];
    g[2] = -8 * x[0] + 2 * x[1] + 5 * x[8] - 2 * x[9] - 12;
    g[3] = 3 * pow(x[0] - 2, 2) + 4 * pow(x[1] - 3, 2) + 2 * x[2] * x[2] - 7 * x[3] - 120;
    g[4] = 5 * x[0] * x[0] + 8 * x[1] + pow(x[2] - 6, 2) - 2 * x[3] - 40;
    g[5] = x[0] * x[0] + 2 * pow(x[1] - 2, 2) - 2 * x[0] * x[1] + 14 * x[4] - 6 * x[5];
    g[6] = 0.5 * pow(x[0] - 8, 2) + 2 * pow(x[1] - 4, 2) + 3 * x[4] * x[4] - x[5] - 30;
    g[7] = -3 * x[0] + 6 * x[1] + 12 * pow(x[8] - 8, 2) - 7 * x[9];
    return x[0] * x[0] + x[1] * x[1] + x[0] * x[1] - 14 * x[0] - 16 * x[1] + pow(x[2] - 10, 2) +
           4 * pow(x[3] - 5, 2) + pow(x[4] - 3, 2) + 2 * pow(x[5] - 1, 2) + 5 * x[6] * x[6] +
           7 * pow(x[7] - 11, 2) + 2 * pow(x[8] - 10, 2) + pow(x[9] - 7, 2) + 45;
}

double g08(X x, Out g, Out) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    g[0] = x[0] * x[0] - x[1] + 1;
    g[1] = 1 - x[0] + pow(x[1] - 4, 2);
    // Undefined at x1 = 0; the evaluator maps the resulting NaN to the worst record.
    return -pow(sin(two_pi * x[0]), 3) * sin(two_pi * x[1]) / (pow(x[0], 3) * (x[0] + x[1]));
}

double g09(X x, Out g, Out) {
    g[0] = -127 + 2 * x[0] * x[0] + 3 * pow(x[1], 4) + x[2] + 4 * x[3] * x[3] + 5 * x[4];
    g[1] = -282 + 7 * x[0] + 3 * x[1] + 10 * x[2] * x[2] + x[3] - x[4];
    g[2] = -196 + 23 * x[0] + x[1] * x[1] + 6 * x[5] * x[5] - 8 * x[6];
    g[3] = 4 * x[0] * x[0] + x[1] * x[1] - 3 * x[0] * x[1] + 2 * x[2] * x[2] + 5 * x[5] - 11 * x[6];
    return pow(x[0] - 10, 2) + 5 * pow(x[1] - 12, 2) + pow(x[2], 4) + 3 * pow(x[3] - 11, 2) +
           10 * pow(x[4], 6) + 7 * x[5] * x[5] + pow(x[6], 4) - 4 * x[5] * x[6] - 10 * x[5] -
           8 * x[6];
}

double g10(X x, Out g, Out) {
    g[0] = -1 + 0.0025 * (x[3] + x[5]);
    g[1] = -1 + 0.0025 * (x[4] + x[6] - x[3]);
    g[2] = -1 + 0.01 * (x[7] - x[4]);
    g[3] = -x[0] * x[5] + 833.33252 * x[3] + 100 * x[0] - 83333.333;
    g[4] = -x[1] * x[6] + 1250 * x[4] + x[1] * x[3] - 1250 * x[3];
    g[5] = -x[2] * x[7] + 1250000 + x[2] * x[4] - 2500 * x[4];
    return x[0] + x[1] + x[2];
}

double g11(X x, Out, Out h) {
    h[0] = x[1] - x[0] * x[0];
    return x[0] * x[0] + pow(x[1] - 1, 2);
}

double g12(X x, Out g, Out) {
    // The feasible set is a union of 9^3 balls of radius 0.25 centred on the
    // integer grid {1..9}^3. The minimum over centres separates per coordinate.
    double dist2 = 0.0;
    for (int d = 0; d < 3; ++d) {
        const double c = std::clamp(std::round(x[d]), 1.0, 9.0);
        dist2 += (x[d] - c) * (x[d] - c);
    }
    g[0] = dist2 - 0.0625;
    return -(100 - pow(x[0] - 5, 2) - pow(x[1] - 5, 2) - pow(x[2] - 5, 2)) / 100;
}

double g13(X x, Out, Out h) {
    h[0] = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3] + x[4] * x[4] - 10;
    h[1] = x[1] * x[2] - 5 * x[3] * x[4];
    h[2] = pow(x[0], 3) + pow(x[1], 3) + 1;
    return exp(x[0] * x[1] * x[2] * x[3] * x[4]);
}

double g14(X x, Out, Out h) {
    static constexpr std::array<double, 10> c = {-6.089, -17.164, -34.054, -5.914, -24.721,
                                                 -14.986, -24.1, -10.708, -26.662, -22.179};
    double total = 0.0;
    for (double v : x) total += v;
    double f = 0.0;
    for (std::size_t i = 0; i < 10; ++i) f += x[i] * (c[i] + log(x[i] / total));
    h[0] = x[0] + 2 * x[1] + 2 * x[2] + x[5] + x[9] - 2;
    h[1] = x[3] + 2 * x[4] + x[5] + x[6] - 1;
    h[2] = x[2] + x[6] + x[7] + 2 * x[8] + x[9] - 1;
    return f;
}

double g15(X x, Out, Out h) {
    h[0] = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - 25;
    h[1] = 8 * x[0] + 14 * x[1] + 7 * x[2] - 56;
    return 1000 - x[0] * x[0] - 2 * x[1] * x[1] - x[2] * x[2] - x[0] * x[1] - x[0] * x[2];
}

double g16(X x, Out g, Out) {
    const double y1 = x[1] + x[2] + 41.6;
    const double c1 = 0.024 * x[3] - 4.62;
    const double y2 = 12.5 / c1 + 12;
    const double c2 = 0.0003535 * x[0] * x[0] + 0.5311 * x[0] + 0.08705 * y2 * x[0];
    const double c3 = 0.052 * x[0] + 78 + 0.002377 * y2 * x[0];
    const double y3 = c2 / c3;
    const double y4 = 19 * y3;
    const double c4 = 0.04782 * (x[0] - y3) + 0.1956 * pow(x[0] - y3, 2) / x[1] + 0.6376 * y4 +
                      1.594 * y3;
    const double c5 = 100 * x[1];
    const double c6 = x[0] - y3 - y4;
    const double c7 = 0.950 - c4 / c5;
    const double y5 = c6 * c7;
    const double y6 = x[0] - y5 - y4 - y3;
    const double c8 = (y5 + y4) * 0.995;
    const double y7 = c8 / y1;
    const double y8 = c8 / 3798;
    const double c9 = y7 - 0.0663 * y7 / y8 - 0.3153;
    const double y9 = 96.82 / c9 + 0.321 * y1;
    const double y10 = 1.29 * y5 + 1.258 * y4 + 2.29 * y3 + 1.71 * y6;
    const double y11 = 1.71 * x[0] - 0.452 * y4 + 0.580 * y3;
    const double c10 = 12.3 / 752.3;
    const double c11 = (1.75 * y2) * (0.995 * x[0]);
    const double c12 = 0.995 * y10 + 1998;
    const double y12 = c10 * x[0] + c11 / c12;
    const double y13 = c12 - 1.75 * y2;
    const double y14 = 3623 + 64.4 * x[1] + 58.4 * x[2] + 146312 / (y9 + x[4]);
    const double c13 = 0.995 * y10 + 60.8 * x[1] + 48 * x[3] - 0.1121 * y14 - 5095;
    const double y15 = y13 / c13;
    const double y16 = 148000 - 331000 * y15 + 40 * y13 - 61 * y15 * y13;
    const double c14 = 2324 * y10 - 28740000 * y2;
    const double y17 = 14130000 - 1328 * y10 - 531 * y11 + c14 / c12;
    const double c15 = y13 / y15 - y13 / 0.52;
    const double c16 = 1.104 - 0.72 * y15;
    const double c17 = y9 + x[4];

    g[0] = 0.28 / 0.72 * y5 - y4;
    g[1] = x[2] - 1.5 * x[1];
    g[2] = 3496 * y2 / c12 - 21;
    g[3] = 110.6 + y1 - 62212 / c17;
    g[4] = 213.1 - y1;
    g[5] = y1 - 405.23;
    g[6] = 17.505 - y2;
    g[7] = y2 - 1053.6667;
    g[8] = 11.275 - y3;
    g[9] = y3 - 35.03;
    g[10] = 214.228 - y4;
    g[11] = y4 - 665.585;
    g[12] = 7.458 - y5;
    g[13] = y5 - 584.463;
    g[14] = 0.961 - y6;
    g[15] = y6 - 265.916;
    g[16] = 1.612 - y7;
    g[17] = y7 - 7.046;
    g[18] = 0.146 - y8;
    g[19] = y8 - 0.222;
    g[20] = 107.99 - y9;
    g[21] = y9 - 273.366;
    g[22] = 922.693 - y10;
    g[23] = y10 - 1286.105;
    g[24] = 926.832 - y11;
    g[25] = y11 - 1444.046;
    g[26] = 18.766 - y12;
    g[27] = y12 - 537.141;
    g[28] = 1072.163 - y13;
    g[29] = y13 - 3247.039;
    g[30] = 8961.448 - y14;
    g[31] = y14 - 26844.086;
    g[32] = 0.063 - y15;
    g[33] = y15 - 0.386;
    g[34] = 71084.33 - y16;
    g[35] = -140000 + y16;
    g[36] = 2802713 - y17;
    g[37] = y17 - 12146108;

    return 0.000117 * y14 + 0.1365 + 0.00002358 * y13 + 0.000001502 * y16 + 0.0321 * y12 +
           0.004324 * y5 + 0.0001 * c15 / c16 + 37.48 * y2 / c12 - 0.0000005843 * y17;
}

double g17(X x, Out, Out h) {
    const double f1 = x[0] < 300 ? 30 * x[0] : 31 * x[0];
    double f2 = 0.0;
    if (x[1] < 100) {
        f2 = 28 * x[1];
    } else if (x[1] < 200) {
        f2 = 29 * x[1];
    } else {
        f2 = 30 * x[1];
    }
    const double a = x[2] * x[3] / 131.078;
    const double b3 = 0.90798 * x[2] * x[2] / 131.078;
    const double b4 = 0.90798 * x[3] * x[3] / 131.078;
    h[0] = -x[0] + 300 - a * cos(1.48477 - x[5]) + b3 * cos(1.47588);
    h[1] = -x[1] - a * cos(1.48477 + x[5]) + b4 * cos(1.47588);
    h[2] = -x[4] - a * sin(1.48477 + x[5]) + b4 * sin(1.47588);
    h[3] = 200 - a * sin(1.48477 - x[5]) + b3 * sin(1.47588);
    return f1 + f2;
}

double g18(X x, Out g, Out) {
    g[0] = x[2] * x[2] + x[3] * x[3] - 1;
    g[1] = x[8] * x[8] - 1;
    g[2] = x[4] * x[4] + x[5] * x[5] - 1;
    g[3] = x[0] * x[0] + pow(x[1] - x[8], 2) - 1;
    g[4] = pow(x[0] - x[4], 2) + pow(x[1] - x[5], 2) - 1;
    g[5] = pow(x[0] - x[6], 2) + pow(x[1] - x[7], 2) - 1;
    g[6] = pow(x[2] - x[4], 2) + pow(x[3] - x[5], 2) - 1;
    g[7] = pow(x[2] - x[6], 2) + pow(x[3] - x[7], 2) - 1;
    g[8] = x[6] * x[6] + pow(x[7] - x[8], 2) - 1;
    g[9] = x[1] * x[2] - x[0] * x[3];
    g[10] = -x[2] * x[8];
    g[11] = x[4] * x[8];
    g[12] = x[5] * x[6] - x[4] * x[7];
    return -0.5 * (x[0] * x[3] - x[1] * x[2] + x[2] * x[8] - x[4] * x[8] + x[4] * x[7] -
                   x[5] * x[6]);
}

double g19(X x, Out g, Out) {
    static constexpr double a[10][5] = {
        {-16, 2, 0, 1, 0},    {0, -2, 0, 0.4, 2},     {-3.5, 0, 2, 0, 0},  {0, -2, 0, -4, -1},
        {0, -9, -2, 1, -2.8}, {2, 0, -4, 0, 0},       {-1, -1, -1, -1, -1}, {-1, -2, -3, -2, -1},
        {1, 2, 3, 4, 5},      {1, 1, 1, 1, 1}};
    static constexpr double b[10] = {-40, -2, -0.25, -4, -4, -1, -40, -60, 5, 1};
    static constexpr double c[5][5] = {{30, -20, -10, 32, -10},
                                       {-20, 39, -6, -31, 32},
                                       {-10, -6, 10, -6, -10},
                                       {32, -31, -6, 39, -20},
                                       {-10, 32, -10, -20, 30}};
    static constexpr double d[5] = {4, 8, 10, 6, 2};
    static constexpr double e[5] = {-15, -27, -36, -18, -12};

    const X y = x.subspan(10, 5);
    double f = 0.0;
    for (int j = 0; j < 5; ++j) {
        for (int i = 0; i < 5; ++i) f += c[i][j] * y[i] * y[j];
        f += 2 * d[j] * pow(y[j], 3);
    }
    for (int i = 0; i < 10; ++i) f -= b[i] * x[i];

    for (int j = 0; j < 5; ++j) {
        double s = 0.0;
        for (int i = 0; i < 5; ++i) s += c[i][j] * y[i];
        double t = 0.0;
        for (int i = 0; i < 10; ++i) t += a[i][j] * x[i];
        g[j] = -2 * s - 3 * d[j] * y[j] * y[j] - e[j] + t;
    }
    return f;
}

double g20(X x, Out g, Out h) {
    static constexpr double a[24] = {0.0693, 0.0577, 0.05, 0.2,  0.26, 0.55, 0.06, 0.1,
                                     0.12,   0.18,   0.1,  0.09, 0.0693, 0.0577, 0.05, 0.2,
                                     0.26,   0.55,   0.06, 0.1,  0.12, 0.18, 0.1,  0.09};
    static constexpr double b[24] = {44.094, 58.12,  58.12,  137.4,  120.9,  170.9,
                                     62.501, 84.94,  133.425, 82.507, 46.07,  60.097,
                                     44.094, 58.12,  58.12,  137.4,  120.9,  170.9,
                                     62.501, 84.94,  133.425, 82.507, 46.07,  60.097};
    static constexpr double c[12] = {123.7, 31.7, 45.7, 14.7, 84.7, 27.7,
                                     49.7,  7.1,  2.1,  17.7, 0.85, 0.64};
    static constexpr double d[12] = {31.244, 36.12, 34.784, 92.7, 82.7, 91.6,
                                     56.708, 82.7,  80.8,   64.517, 49.4, 49.1};
    static constexpr double e[6] = {0.1, 0.3, 0.4, 0.3, 0.6, 0.3};
    const double k = 0.7302 * 530 * (14.7 / 40);

    double f = 0.0;
    double total = 0.0;
    double ratio_lo = 0.0;  // sum_{j<12} x_j / b_j
    double ratio_hi = 0.0;  // sum_{j>=12} x_j / b_j
    double dsum = 0.0;
    for (int j = 0; j < 24; ++j) {
        f += a[j] * x[j];
        total += x[j];
        if (j < 12) {
            ratio_lo += x[j] / b[j];
            dsum += x[j] / d[j];
        } else {
            ratio_hi += x[j] / b[j];
        }
    }
    for (int i = 0; i < 3; ++i) g[i] = (x[i] + x[i + 12]) / (total + e[i]);
    for (int i = 3; i < 6; ++i) g[i] = (x[i + 3] + x[i + 15]) / (total + e[i]);
    for (int i = 0; i < 12; ++i) {
        h[i] = x[i + 12] / (b[i + 12] * ratio_hi) - c[i] * x[i] / (40 * b[i] * ratio_lo);
    }
    h[12] = total - 1;
    h[13] = dsum + k * ratio_hi - 1.671;
    return f;
}

double g21(X x, Out g, Out h) {
    g[0] = -x[0] + 35 * pow(x[1], 0.6) + 35 * pow(x[2], 0.6);
    h[0] = -300 * x[2] + 7500 * x[4] - 7500 * x[5] - 25 * x[3] * x[4] + 25 * x[3] * x[5] +
           x[2] * x[3];
    h[1] = 100 * x[1] + 155.365 * x[3] + 2500 * x[6] - x[1] * x[3] - 25 * x[3] * x[6] - 15536.5;
    h[2] = -x[4] + log(-x[3] + 900);
    h[3] = -x[5] + log(x[3] + 300);
    h[4] = -x[6] + log(-2 * x[3] + 700);
    return x[0];
}

double g22(X x, Out g, Out h) {
    g[0] = -x[0] + pow(x[1], 0.6) + pow(x[2], 0.6) + pow(x[3], 0.6);
    h[0] = x[4] - 100000 * x[7] + 1e7;
    h[1] = x[5] + 100000 * x[7] - 100000 * x[8];
    h[2] = x[6] + 100000 * x[8] - 5e7;
    h[3] = x[4] + 100000 * x[9] - 3.3e7;
    h[4] = x[5] + 100000 * x[10] - 4.4e7;
    h[5] = x[6] + 100000 * x[11] - 6.6e7;
    h[6] = x[4] - 120 * x[1] * x[12];
    h[7] = x[5] - 80 * x[2] * x[13];
    h[8] = x[6] - 40 * x[3] * x[14];
    h[9] = x[7] - x[10] + x[15];
    h[10] = x[8] - x[11] + x[16];
    h[11] = -x[17] + log(x[9] - 100);
    h[12] = -x[18] + log(-x[7] + 300);
    h[13] = -x[19] + log(x[15]);
    h[14] = -x[20] + log(-x[8] + 400);
    h[15] = -x[21] + log(x[16]);
    h[16] = -x[7] - x[9] + x[12] * x[17] - x[12] * x[18] + 400;
    h[17] = x[7] - x[8] - x[10] + x[13] * x[19] - x[13] * x[20] + 400;
    h[18] = x[8] - x[11] - 4.60517 * x[14] + x[14] * x[21] + 100;
    return x[0];
}

double g23(X x, Out g, Out h) {
    g[0] = x[8] * x[2] + 0.02 * x[5] - 0.025 * x[4];
    g[1] = x[8] * x[3] + 0.02 * x[6] - 0.015 * x[7];
    h[0] = x[0] + x[1] - x[2] - x[3];
    h[1] = 0.03 * x[0] + 0.01 * x[1] - x[8] * (x[2] + x[3]);
    h[2] = x[2] + x[5] - x[4];
    h[3] = x[3] + x[6] - x[7];
    return -9 * x[4] - 15 * x[7] + 6 * x[0] + 16 * x[1] + 10 * (x[5] + x[6]);
}

double g24(X x, Out g, Out) {
    g[0] = -2 * pow(x[0], 4) + 8 * pow(x[0], 3) - 8 * x[0] * x[0] + x[1] - 2;
    g[1] = -4 * pow(x[0], 4) + 32 * pow(x[0], 3) - 88 * x[0] * x[0] + 96 * x[0] + x[1] - 36;
    return -x[0] - x[1];
}

// ---------------------------------------------------------------------------
// Reference data.
// ---------------------------------------------------------------------------

struct RateRow {
    double s[4];
    double f[4];
};

struct OutcomeRow {
    double pso_f[3];
    double pso_c[3];
    double sqp_f[3];
    double sqp_c[3];
};

ReferenceStat stat(const double (&v)[3]) { return {opt(v[0]), opt(v[1]), opt(v[2])}; }

struct RawEntry {
    ProblemDefinition problem;
    std::optional<Vector> optimizer;
    RateRow rates;
    double fes[5];
    OutcomeRow outcome;
};

BenchmarkEntry finish(RawEntry raw) {
    BenchmarkEntry e;
    e.f_star = raw.problem.f_star;
    e.problem = std::move(raw.problem);
    e.optimizer_point = std::move(raw.optimizer);
    for (std::size_t a = 0; a < 4; ++a) {
        e.rates[a] = ReferenceRate{opt(raw.rates.s[a]), raw.rates.f[a]};
    }
    e.fes = ReferenceFes{opt(raw.fes[0]), opt(raw.fes[1]), opt(raw.fes[2]), opt(raw.fes[3]),
                         opt(raw.fes[4])};
    e.outcome = ReferenceOutcome{stat(raw.outcome.pso_f), stat(raw.outcome.pso_c),
                                 stat(raw.outcome.sqp_f), stat(raw.outcome.sqp_c)};
    return e;
}

constexpr RateRow kAllHundred{{100, 100, 100, 100}, {100, 100, 100, 100}};

std::vector<BenchmarkEntry> build_registry() {
    std::vector<RawEntry> raw;
    raw.reserve(24);

    raw.push_back(RawEntry{
        make("g01", filled(13, 0.0), {1, 1, 1, 1, 1, 1, 1, 1, 1, 100, 100, 100, 1}, 9, 0, g01,
             -15.000000),
        Vector{1, 1, 1, 1, 1, 1, 1, 1, 1, 3, 3, 3, 1},
        kAllHundred,
        {5.5e4, 3.1e4, 9.2e1, 1.0e5, 3.3e4},
        {{-15.0, -15.0, 5.8e-12}, {0, 0, 0}, {-15.0, -15.0, 2.9e-12}, {0, 0, 0}}});

    raw.push_back(RawEntry{
        make("g02", filled(20, 0.0), filled(20, 10.0), 2, 0, g02, -0.803619),
        Vector{3.16246061572185,  3.12833142812967,  3.09479212988791,  3.06145059523469,
               3.02792915885555,  2.99382606701730,  2.95866871765285,  2.92184227312450,
               0.49482511456933,  0.48835711005490,  0.48231642711865,  0.47664475092742,
               0.47129550835493,  0.46623099264167,  0.46142004984199,  0.45683664767217,
               0.45245876903267,  0.44826762241853,  0.44424700958760,  0.44038285956317},
        {{70, 70, 56, 84}, {100, 100, 100, 100}},
        {1.7e5, 1.1e5, 1.3e3, 2.3e5, 1.8e5},
        {{-0.803616, -0.800309, 5.3e-3}, {0, 0, 0}, {-0.803619, -0.800316, 5.3e-3},
         {3.1e-15, 4.3e-15, 2.2e-15}}});

    raw.push_back(RawEntry{
        make("g03", filled(10, 0.0), filled(10, 1.0), 0, 1, g03, -1.000500),
        Vector(10, 0.31624357647283069),
        {{70, 100, 100, 100}, {100, 100, 100, 100}},
        {3.2e4, 1.7e3, 1.3e3, 4.5e5, 2.6e4},
        {{-1.000495, -1.000102, 9.9e-4}, {-5.2e-6, -5.4e-7, 1.6e-6},
         {-1.000500, -1.000500, 2.7e-15}, {7.0e-16, 5.2e-16, 6.7e-16}}});

    raw.push_back(RawEntry{
        make("g04", {78, 33, 27, 27, 27}, {102, 45, 45, 45, 45}, 6, 0, g04, -30665.538672),
        Vector{78, 33, 29.9952560256815985, 45, 36.7758129057882073},
        kAllHundred,
        {4.2e4, 4.1e4, 3.2e1, 8.0e4, 2.5e4},
        {{-30665.538672, -30665.538672, 3.8e-12}, {0, 0, 0},
         {-30665.538672, -30665.538672, 3.8e-12}, {0, 0, 0}}});

    raw.push_back(RawEntry{
        make("g05", {0, 0, -0.55, -0.55}, {1200, 1200, 0.55, 0.55}, 2, 3, g05, 5126.496714),
        Vector{679.945148297028709, 1026.06697600004691, 0.118876369094410433,
               -0.396233485215178266},
        {{0, 100, 100, 100}, {100, 100, 100, 100}},
        {kNa, 0.0, kNa, 4.5e5, 2.9e4},
        {{5126.496817, 5127.151053, 1.3}, {-2.5e-14, -2.5e-14, 0.0},
         {5126.496714, 5126.496714, 1.0e-12}, {8.9e-14, -1.4e-14, 3.6e-14}}});

    raw.push_back(RawEntry{
        make("g06", {13, 0}, {100, 100}, 2, 0, g06, -6961.813876),
        Vector{14.09500000000000064, 0.8429607892154795668},
        kAllHundred,
        {4.1e4, 0.0, 4.0e1, 5.7e4, 2.8e4},
        {{-6961.813876, -6961.813876, 1.9e-12}, {0, 0, 0},
         {-6961.813876, -6961.813876, 1.9e-12}, {0, 0, 0}}});

    raw.push_back(RawEntry{
        make("g07", filled(10, -10.0), filled(10, 10.0), 8, 0, g07, 24.306209),
        Vector{2.1719963405279885, 2.3636830412527665, 8.773925738412157, 5.095984436786165,
               0.9906547556713419, 1.4305739279015757, 1.321644153100768, 9.82872576358432,
               8.280091587308565, 8.37592664741258},
        {{0, 100, 96, 100}, {100, 100, 100, 100}},
        {kNa, 6.1e4, 5.5e2, 3.5e5, 2.7e4},
        {{24.330287, 24.639188, 2.4e-1}, {0, 0, 0}, {24.306209, 24.306209, 1.1e-14},
         {7.1e-15, 5.2e-15, 3.3e-15}}});

    raw.push_back(RawEntry{
        make("g08", {0, 0}, {10, 10}, 2, 0, g08, -0.095825),
        Vector{1.22797135260752599, 4.24537336612274885},
        kAllHundred,
        {1.2e4, 1.1e4, 8.5e1, 6.1e3, 4.1e3},
        {{-0.095825, -0.095825, 1.4e-17}, {0, 0, 0}, {-0.095825, -0.095825, 1.4e-17},
         {-1.7e-1, -1.7e-1, 6.3e-10}}});

    raw.push_back(RawEntry{
        make("g09", filled(7, -10.0), filled(7, 10.0), 4, 0, g09, 680.630057),
        Vector{2.33049935068898, 1.9513723677575285, -0.47754140037583287, 4.3657262485753145,
               -0.62448695996129, 1.0381309932771328, 1.5942266773564706},
        {{0, 100, 100, 100}, {100, 100, 100, 100}},
        {kNa, 0.0, 2.8e2, 9.8e4, 2.9e4},
        {{680.630911, 680.633029, 1.6e-3}, {0, 0, 0}, {680.630057, 680.630057, 7.6e-14},
         {0.0, 8.2e-15, 2.2e-14}}});

    raw.push_back(RawEntry{
        make("g10", {100, 1000, 1000, 10, 10, 10, 10, 10},
             {10000, 10000, 10000, 1000, 1000, 1000, 1000, 1000}, 6, 0, g10, 7049.248021),
        Vector{579.306685017979589, 1359.97067807935605, 5109.97065743133317, 182.01769963061534,
               295.601173702746792, 217.982300369384632, 286.41652592786852,
               395.601173702746735},
        {{0, 70, 16, 100}, {100, 70, 100, 100}},
        {kNa, 7.2e4, 7.2e2, 4.5e5, 2.6e4},
        {{7050.865659, 7093.127835, 3.0e1}, {0, 0, 0}, {7049.248021, 7049.248024, 1.0e-5},
         {0.0, -3.2e-6, 1.0e-5}}});

    raw.push_back(RawEntry{
        make("g11", {-1, -1}, {1, 1}, 0, 1, g11, 0.749900),
        Vector{-0.7070360708831757, 0.5000000034708938},
        kAllHundred,
        {1.0e4, 0.0, 4.0e1, 4.5e5, 1.5e4},
        {{0.749900, 0.749900, 1.7e-8}, {-8.4e-16, -1.1e-16, 2.6e-16}, {0.749900, 0.749900, 6.4e-17},
         {4.4e-17, 5.6e-18, 6.4e-17}}});

    raw.push_back(RawEntry{
        make("g12", filled(3, 0.0), filled(3, 10.0), 1, 0, g12, -1.000000),
        Vector{5, 5, 5},
        kAllHundred,
        {9.1e3, 6.1e3, 4.1e1, 8.1e3, 5.4e3},
        {{-1, -1, 0}, {0, 0, 0}, {-1, -1, 0}, {-6.2e-2, -6.2e-2, 4.8e-15}}});

    raw.push_back(RawEntry{
        make("g13", {-2.3, -2.3, -3.2, -3.2, -3.2}, {2.3, 2.3, 3.2, 3.2, 3.2}, 0, 3, g13,
             0.053942),
        Vector{-1.7171422401404117, 1.5957212406219254, 1.8272502404218576, -0.7636598818985336,
               -0.7636598673532109},
        {{90, 100, 100, 100}, {100, 100, 100, 100}},
        {4.7e4, 4.4e3, 1.6e2, 4.5e5, 4.1e4},
        {{0.053942, 0.053979, 3.8e-5}, {-6.2e-10, -6.2e-11, 2.0e-10}, {0.053942, 0.053942, 5.0e-17},
         {6.2e-15, 2.2e-15, 2.2e-15}}});

    raw.push_back(RawEntry{
        make("g14", filled(10, 0.0), filled(10, 10.0), 0, 3, g14, -47.764888),
        Vector{0.040668411153638236, 0.14772124197810765, 0.7832056944476397,
               0.0014143384884428517, 0.48529362707103946, 0.0006931823051844959,
               0.027405202949903344, 0.017950963086414223, 0.03732681789625633,
               0.09688446369978831},
        {{0, 100, 0, 100}, {100, 100, 100, 100}},
        {kNa, 5.2e4, 1.5e3, kNa, 2.5e4},
        {{-47.723001, -47.606122, 1.5e-1}, {-9.4e-6, -9.9e-7, 3.0e-6},
         {-47.764888, -47.764888, 1.1e-14}, {2.1e-16, 1.9e-16, 7.0e-17}}});

    raw.push_back(RawEntry{
        make("g15", filled(3, 0.0), filled(3, 10.0), 0, 2, g15, 961.715022),
        Vector{3.51212812611795133, 0.216987510429556135, 3.55217854929179921},
        {{90, 100, 100, 100}, {100, 100, 100, 100}},
        {3.8e4, 0.0, 8.2e1, 4.5e5, 2.9e4},
        {{961.715023, 961.715044, 3.0e-5}, {-3.9e-14, -1.8e-14, 1.6e-14},
         {961.715022, 961.715022, 1.4e-13}, {3.3e-15, 2.3e-15, 2.4e-15}}});

    raw.push_back(RawEntry{
        make("g16", {704.4148, 68.6, 0, 193, 25}, {906.3855, 288.88, 134.75, 287.0966, 84.1988},
             38, 0, g16, -1.905155),
        Vector{705.174537070090537, 68.5999999999999943, 102.899999999999991, 282.324931593660324,
               37.5841164258054832},
        kAllHundred,
        {2.3e4, 2.5e4, 1.1e2, 4.9e4, 5.3e4},
        {{-1.905155, -1.905155, 4.7e-16}, {0, 0, 0}, {-1.905155, -1.905155, 4.7e-16}, {0, 0, 0}}});

    raw.push_back(RawEntry{
        make("g17", {0, 0, 340, 340, -1000, 0}, {400, 1000, 420, 420, 1000, 0.5236}, 0, 4, g17,
             8853.539675),
        Vector{201.784467214523659, 99.9999999999999005, 383.071034852773266, 420,
               -10.9076584514292652, 0.0731482312084287128},
        {{100, 90, 0, 0}, {100, 90, 100, 100}},
        {7.4e4, 8.2e4, 1.5e3, kNa, kNa},
        {{8853.539675, 8853.539675, 1.3e-7}, {-1.1e-9, -1.1e-10, 3.5e-10},
         {8853.539675, 8853.539675, 1.3e-7}, {-5.4e-14, -2.9e-13, 4.8e-13}}});

    raw.push_back(RawEntry{
        make("g18", {-10, -10, -10, -10, -10, -10, -10, -10, 0}, {10, 10, 10, 10, 10, 10, 10, 10, 20},
             13, 0, g18, -0.866025),
        Vector{-0.657776192427943163, -0.153418773482438542, 0.323413871675240938,
               -0.946257611651304398, -0.657776194376798906, -0.753213434632691414,
               0.323413874123576972, -0.346462947962331735, 0.59979466285217542},
        {{20, 100, 92, 100}, {100, 100, 100, 100}},
        {4.5e4, 2.0e4, 2.0e2, 2.1e5, 3.3e4},
        {{-0.866014, -0.858576, 1.2e-2}, {0, 0, 0}, {-0.866025, -0.866025, 2.1e-15},
         {6.8e-15, 1.4e-15, 2.5e-15}}});

    raw.push_back(RawEntry{
        make("g19", filled(15, 0.0), filled(15, 10.0), 5, 0, g19, 32.655593),
        Vector{8.469914395360592e-11, 8.469917603776894e-11, 3.9459905630656738,
               8.469915152835961e-11, 3.283177515880338, 10.0, 8.469914349959943e-11,
               8.46991435701739e-11, 8.469935489267573e-11, 8.469933279639683e-11,
               0.3707648475228228, 0.27845602193234037, 0.523838483392556, 0.388620151565121,
               0.29815676028034466},
        {{0, 100, 0, 100}, {100, 100, 100, 100}},
        {kNa, 1.3e4, 4.2e2, kNa, 2.2e4},
        {{34.879435, 37.062544, 1.4}, {0, 0, 0}, {32.655593, 32.655593, 4.1e-15},
         {7.1e-15, 4.8e-15, 2.9e-15}}});

    raw.push_back(RawEntry{
        make("g20", filled(24, 0.0), filled(24, 10.0), 6, 14, g20, kNa),
        std::nullopt,
        {{kNa, kNa, kNa, kNa}, {0, 0, 0, 0}},
        {kNa, kNa, kNa, kNa, kNa},
        {{0.080909, 0.139964, 3.8e-2}, {3.2e-3, 1.8e-1, 1.4e-1}, {0.177130, 0.186264, 3.4e-3},
         {1.2e-1, 3.3e-1, 2.1e-1}}});

    raw.push_back(RawEntry{
        make("g21", {0, 0, 0, 100, 6.3, 5.9, 4.5}, {1000, 40, 40, 300, 6.7, 6.4, 6.25}, 1, 5, g21,
             193.724510),
        Vector{193.7245101237125, 1.3218449027169696e-25, 17.319188737374496, 100.04789776975322,
               6.684451853763323, 5.991684284263574, 6.214516488887264},
        {{0, 0, 0, 100}, {0, 0, 100, 100}},
        {kNa, kNa, kNa, kNa, 1.4e5},
        {{1113.283037, 1372.222391, 2.7e2}, {kNa, kNa, kNa}, {kNa, kNa, kNa}, {kNa, kNa, kNa}}});

    raw.push_back(RawEntry{
        make("g22",
             {0, 0, 0, 0, 0, 0, 0, 100, 100, 100.01, 100, 100, 0, 0, 0, 0.01, 0.01, -4.7, -4.7, -4.7,
              -4.7, -4.7},
             {20000, 1e6, 1e6, 1e6, 4e7, 4e7, 4e7, 299.99, 399.99, 300, 400, 600, 500, 500, 500, 300,
              400, 6.25, 6.25, 6.25, 6.25, 6.25},
             1, 19, g22, 236.430976),
        Vector{236.430975504001054, 135.82847151732463,  204.818152544824585, 6446.54654059436416,
               3007540.83940215595, 4074188.65771341929, 32918270.5028952882, 130.075408394314167,
               170.817294970528621, 299.924591605478554, 399.258113423595205, 330.817294971142758,
               184.51831230897065,  248.64670239647424,  127.658546694545862, 269.182627528746707,
               160.000016724090955, 5.29788288102680571, 5.13529735903945728, 5.59531526444068827,
               5.43444479314453499, 5.07517453535834395},
        {{0, 0, 0, 0}, {0, 0, 0, 0}},
        {kNa, kNa, kNa, kNa, kNa},
        {{2144.075703, 11776.390206, 9.4e3}, {1.7, kNa, kNa}, {kNa, kNa, kNa}, {kNa, kNa, kNa}}});

    raw.push_back(RawEntry{
        make("g23", {0, 0, 0, 0, 0, 0, 0, 0, 0.01}, {300, 300, 100, 200, 100, 300, 100, 200, 0.03},
             2, 4, g23, -400.055100),
        Vector{0.005099993954172306, 99.99470858577556, 2.1351117886475556e-20, 99.99990857962973,
               9.99926255093897e-05, 4.7684031966401164e-20, 99.99999404184761, 199.99999995213005,
               0.010000009999810053},
        {{0, 100, 0, 100}, {0, 100, 96, 100}},
        {kNa, 3.7e4, 2.6e2, kNa, 2.1e5},
        {{-2016.651110, -966.309692, 8.6e2}, {1.7, 2.3, 2.6e-1}, {-400.055100, -400.055100, 2.2e-13},
         {3.3e-15, 8.4e-15, 1.2e-14}}});

    raw.push_back(RawEntry{
        make("g24", {0, 0}, {3, 4}, 2, 0, g24, -5.508013),
        Vector{2.32952019747762, 3.1784930741176289},
        kAllHundred,
        {1.2e4, 7.4, 2.9e1, 2.0e4, 1.9e4},
        {{-5.508013, -5.508013, 9.4e-16}, {0, 0, 0}, {-5.508013, -5.508013, 9.4e-16}, {0, 0, 0}}});

    std::vector<BenchmarkEntry> out;
    out.reserve(raw.size());
    for (auto& r : raw) out.push_back(finish(std::move(r)));
    return out;
}

const std::vector<BenchmarkEntry>& registry() {
    static const std::vector<BenchmarkEntry> entries = build_registry();
    return entries;
}

// ---------------------------------------------------------------------------
// Metadata export
// ---------------------------------------------------------------------------

constexpr std::array<std::string_view, 4> kAlgoKeys = {"gp_pso", "gp_pso_sqp", "peso_plus",
                                                       "dms_pso"};
constexpr std::array<std::string_view, 5> kFesKeys = {"gp_pso", "gp_pso_loc", "sqp", "peso_plus",
                                                      "dms_pso"};

std::array<std::optional<double>*, 5> fes_fields(ReferenceFes& f) {
    return {&f.gp_pso, &f.gp_pso_loc, &f.sqp, &f.peso_plus, &f.dms_pso};
}

std::array<const std::optional<double>*, 5> fes_fields(const ReferenceFes& f) {
    return {&f.gp_pso, &f.gp_pso_loc, &f.sqp, &f.peso_plus, &f.dms_pso};
}

std::array<std::optional<double>*, 3> stat_fields(ReferenceStat& s) {
    return {&s.best, &s.average, &s.stdev};
}

std::array<const std::optional<double>*, 3> stat_fields(const ReferenceStat& s) {
    return {&s.best, &s.average, &s.stdev};
}

constexpr std::array<std::string_view, 3> kStatKeys = {"best", "average", "stdev"};

/// Ordered column list shared by the JSON and CSV encoders.
std::vector<std::string> metadata_columns() {
    std::vector<std::string> cols = {"name", "dim", "n_ineq", "n_eq", "f_star"};
    for (auto k : kAlgoKeys) cols.push_back("ref_success_" + std::string(k));
    for (auto k : kAlgoKeys) cols.push_back("ref_feasible_" + std::string(k));
    for (auto k : kFesKeys) cols.push_back("ref_fes_" + std::string(k));
    for (auto k : kStatKeys) cols.push_back("ref_pso_f_" + std::string(k));
    for (auto k : kStatKeys) cols.push_back("ref_sqp_f_" + std::string(k));
    return cols;
}

nlohmann::json optional_json(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::vector<nlohmann::json> metadata_values(const BenchmarkMetadata& m) {
    std::vector<nlohmann::json> v = {m.name, m.dim, m.n_ineq, m.n_eq, optional_json(m.f_star)};
    for (const auto& s : m.ref_success_pct) v.push_back(optional_json(s));
    for (double f : m.ref_feasible_pct) v.push_back(f);
    for (const auto* f : fes_fields(m.ref_fes)) v.push_back(optional_json(*f));
    for (const auto* s : stat_fields(m.ref_pso_conflict)) v.push_back(optional_json(*s));
    for (const auto* s : stat_fields(m.ref_sqp_conflict)) v.push_back(optional_json(*s));
    return v;
}

std::optional<double> optional_from(const nlohmann::json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

BenchmarkMetadata metadata_from_values(const std::vector<nlohmann::json>& v) {
    if (v.size() != metadata_columns().size()) {
        throw std::invalid_argument("metadata record has the wrong number of fields");
    }
    BenchmarkMetadata m;
    std::size_t i = 0;
    m.name = v[i++].get<std::string>();
    m.dim = v[i++].get<std::size_t>();
    m.n_ineq = v[i++].get<std::size_t>();
    m.n_eq = v[i++].get<std::size_t>();
    m.f_star = optional_from(v[i++]);
    for (auto& s : m.ref_success_pct) s = optional_from(v[i++]);
    for (auto& f : m.ref_feasible_pct) f = v[i++].get<double>();
    for (auto* f : fes_fields(m.ref_fes)) *f = optional_from(v[i++]);
    for (auto* s : stat_fields(m.ref_pso_conflict)) *s = optional_from(v[i++]);
    for (auto* s : stat_fields(m.ref_sqp_conflict)) *s = optional_from(v[i++]);
    return m;
}

std::string csv_cell(const nlohmann::json& j) {
    if (j.is_null()) return "";
    if (j.is_string()) return j.get<std::string>();
    return j.dump();
}

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

std::string_view to_string(ReferenceAlgorithm a) noexcept {
    switch (a) {
        case ReferenceAlgorithm::gp_pso: return "GP-PSO";
        case ReferenceAlgorithm::gp_pso_sqp: return "GP-PSO-SQP";
        case ReferenceAlgorithm::peso_plus: return "PESO+";
        case ReferenceAlgorithm::dms_pso: return "DMS-PSO";
    }
    return "?";
}

std::span<const BenchmarkEntry> all_benchmarks() { return registry(); }

std::vector<std::string> benchmark_names() {
    std::vector<std::string> names;
    for (const auto& e : registry()) names.push_back(e.problem.name);
    return names;
}

const BenchmarkEntry& lookup(std::string_view name) {
    for (const auto& e : registry()) {
        if (e.problem.name == name) return e;
    }
    std::string msg = "unknown benchmark '" + std::string(name) + "'; valid names:";
    for (const auto& n : benchmark_names()) msg += " " + n;
    throw BenchmarkNotFound(msg);
}

BenchmarkMetadata metadata_of(const BenchmarkEntry& entry) {
    BenchmarkMetadata m;
    m.name = entry.problem.name;
    m.dim = entry.problem.dimension;
    m.n_ineq = entry.problem.num_inequalities;
    m.n_eq = entry.problem.num_equalities;
    m.f_star = entry.f_star;
    for (std::size_t a = 0; a < 4; ++a) {
        m.ref_success_pct[a] = entry.rates[a].success_pct;
        m.ref_feasible_pct[a] = entry.rates[a].feasible_pct;
    }
    m.ref_fes = entry.fes;
    m.ref_pso_conflict = entry.outcome.pso_conflict;
    m.ref_sqp_conflict = entry.outcome.sqp_conflict;
    return m;
}

std::string export_metadata(MetadataFormat format) {
    const auto cols = metadata_columns();
    if (format == MetadataFormat::json) {
        nlohmann::ordered_json doc = nlohmann::ordered_json::array();
        for (const auto& e : registry()) {
            const auto values = metadata_values(metadata_of(e));
            nlohmann::ordered_json rec = nlohmann::ordered_json::object();
            for (std::size_t i = 0; i < cols.size(); ++i) rec[cols[i]] = values[i];
            doc.push_back(std::move(rec));
        }
        return doc.dump(2) + "\n";
    }
    std::ostringstream os;
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    for (const auto& e : registry()) {
        const auto values = metadata_values(metadata_of(e));
        for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << csv_cell(values[i]);
        os << '\n';
    }
    return os.str();
}

std::vector<BenchmarkMetadata> parse_metadata(std::string_view document, MetadataFormat format) {
    const auto cols = metadata_columns();
    std::vector<BenchmarkMetadata> out;
    try {
        if (format == MetadataFormat::json) {
            const auto doc = nlohmann::json::parse(document);
            for (const auto& rec : doc) {
                std::vector<nlohmann::json> values;
                for (const auto& c : cols) values.push_back(rec.at(c));
                out.push_back(metadata_from_values(values));
            }
            return out;
        }
        auto lines = split(document, '\n');
        if (lines.empty() || split(lines.front(), ',') != cols) {
            throw std::invalid_argument("CSV header does not match the metadata columns");
        }
        for (std::size_t li = 1; li < lines.size(); ++li) {
            if (lines[li].empty()) continue;
            const auto cells = split(lines[li], ',');
            std::vector<nlohmann::json> values;
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i == 0) {
                    values.emplace_back(cells[i]);
                } else if (cells[i].empty()) {
                    values.emplace_back(nullptr);
                } else {
                    values.push_back(nlohmann::json::parse(cells[i]));
                }
            }
            out.push_back(metadata_from_values(values));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed metadata: ") + e.what());
    }
    return out;
}

}  // namespace swarmsqp
