#pragma once

// Chebyshev coefficients for e^x sqrt(x) K_n(x), n = 0, 1.
// Window mid:  x in [2, 8],    t = (16/x - 5) / 3
// Window tail: x in [8, inf),  t = 16/x - 1
// Convention: f(t) = c[0]/2 + sum_{k>=1} c[k] T_k(t).
// Tables produced by tools/gen_bessel_coeffs.py; max relative error
// of the truncated expansions is below 6e-20 in each window.

namespace robinext::detail {

inline constexpr double k0_cheb_mid[] = {
    2.42356052096672058576,
    -0.0223565260569981905202,
    0.000773418115469385823530,
    -0.0000428100668888609946445,
    0.00000308170017386297474365,
    -2.63936722200966497407e-7,
    2.56371303640346920629e-8,
    -2.74270554990020126384e-9,
    3.16942965809749959126e-10,
    -3.90235328696218410038e-11,
    5.06804069818857331096e-12,
    -6.88957474100776364181e-13,
    9.74497849782038707072e-14,
    -1.42733284185568808598e-14,
    2.15641256949964312573e-15,
    -3.34965417401255669874e-16,
    5.33525584012532576892e-17,
    -8.69343092217427984269e-18,
    1.44508119733281956103e-18,
    -2.37861036023558504053e-19,
};

inline constexpr double k0_cheb_tail[] = {
    2.48798130173692407760,
    -0.00917485269102569531065,
    0.000144455093177500582105,
    -0.00000401361417543570972867,
    1.56783181085231067259e-7,
    -7.77011043852173771023e-9,
    4.61118257617971787793e-10,
    -3.15859299786056551322e-11,
    2.43501803936502640622e-12,
    -2.07433138739748494756e-13,
    1.92578728053801964061e-14,
    -1.92755480263192862223e-15,
    2.06219782521421609229e-16,
    -2.34167173783138816570e-17,
    2.80499585851194359526e-18,
    -3.46682137174836528108e-19,
};

inline constexpr double k1_cheb_mid[] = {
    2.77443134069738829695,
    0.0757198995319936781709,
    -0.00144105155647540612299,
    0.0000665011695512574793943,
    -0.00000436998470952014076606,
    3.54027749976305267994e-7,
    -3.31116377929329202090e-8,
    3.44597758190105345321e-9,
    -3.89893234747542710401e-10,
    4.72081975046583559528e-11,
    -6.04783566287535395716e-12,
    8.12849487486575800083e-13,
    -1.13869457471418452234e-13,
    1.65403584081461177656e-14,
    -2.48090256603604510525e-15,
    3.82923780140938895123e-16,
    -6.06472927498548533314e-17,
    9.83216114687216952141e-18,
    -1.62694873331477550800e-18,
    2.66747214964715243955e-19,
};

inline constexpr double k1_cheb_tail[] = {
    2.56379308343739001037,
    0.0283288781304972093584,
    -0.000247537067390525034541,
    0.00000577197245160724882047,
    -2.06893921953654830275e-7,
    9.73998344138180418022e-9,
    -5.58533614038062497982e-10,
    3.73299663404618496768e-11,
    -2.82505196102320982226e-12,
    2.37201900248322651349e-13,
    -2.17667738793644333533e-14,
    2.15791415818978683213e-15,
    -2.29019671221231954156e-16,
    2.58287135566108972356e-17,
    -3.07577513711426817579e-18,
    3.78260098277630615472e-19,
};

}  // namespace robinext::detail
