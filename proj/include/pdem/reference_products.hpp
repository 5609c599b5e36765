#pragma once

// Reference uncertainty products (Delta mu)(Delta pi) printed to six
// significant digits, n = 0..8, for the standard l-grid.

#include <array>

#include "pdem/eigenstates.hpp"

namespace pdem {

struct ReferenceRow {
  double l;
  Case kind;
  std::array<double, 9> products;  ///< n = 0..8
};

inline constexpr std::array<ReferenceRow, 32> kReferenceProducts = {{
    {0.0, Case::LI, {0.546754, 1.43040, 2.30175, 3.17156, 4.04111, 4.91069, 5.78034, 6.65008, 7.51991}},
    {0.0, Case::LIII, {0.749999, 1.10397, 1.53884, 2.00195, 2.47840, 2.96214, 3.45026, 3.94121, 4.43410}},
    {0.5, Case::LI, {0.527801, 1.44084, 2.33128, 3.21362, 4.09202, 4.96819, 5.84297, 6.71682, 7.59002}},
    {0.5, Case::LIII, {0.666667, 1.14262, 1.61521, 2.09513, 2.58057, 3.06972, 3.56137, 4.05477, 4.54943}},
    {1.0, Case::LI, {0.519534, 1.44954, 2.35391, 3.24671, 4.13316, 5.01570, 5.89566, 6.77379, 7.65061}},
    {1.0, Case::LIII, {0.625000, 1.18014, 1.68605, 2.18268, 2.67767, 3.17281, 3.66850, 4.16477, 4.66156}},
    {1.5, Case::LI, {0.514988, 1.45625, 2.37137, 3.27307, 4.16679, 5.05536, 5.94036, 6.82279, 7.70332}},
    {1.5, Case::LIII, {0.599999, 1.21269, 1.74938, 2.26327, 2.76875, 3.27074, 3.77116, 4.27086, 4.77022}},
    {2.0, Case::LI, {0.512135, 1.46147, 2.38517, 3.29448, 4.19474, 5.08891, 5.97875, 6.86540, 7.74960}},
    {2.0, Case::LIII, {0.583333, 1.24019, 1.80524, 2.33667, 2.85350, 3.36317, 3.86905, 4.37275, 4.87516}},
    {2.5, Case::LI, {0.510185, 1.46561, 2.39632, 3.31220, 4.21833, 5.11769, 6.01210, 6.90280, 7.79061}},
    {2.5, Case::LIII, {0.571428, 1.26336, 1.85433, 2.40324, 2.93198, 3.45006, 3.96204, 4.47033, 4.97626}},
    {3.0, Case::LI, {0.508770, 1.46897, 2.40551, 3.32710, 4.23851, 5.14264, 6.04136, 6.93592, 7.82723}},
    {3.0, Case::LIII, {0.562500, 1.28300, 1.89754, 2.46352, 3.00451, 3.53151, 4.05016, 4.56354, 5.07346}},
    {3.5, Case::LI, {0.507698, 1.47174, 2.41321, 3.33981, 4.25597, 5.16450, 6.06724, 6.96547, 7.86014}},
    {3.5, Case::LIII, {0.555555, 1.29978, 1.93572, 2.51816, 3.07148, 3.60778, 4.13354, 4.65245, 5.16674}},
    {4.0, Case::LI, {0.506858, 1.47406, 2.41976, 3.35077, 4.27123, 5.18380, 6.09030, 6.99202, 7.88990}},
    {4.0, Case::LIII, {0.550000, 1.31424, 1.96960, 2.56778, 3.13336, 3.67916, 4.21235, 4.73715, 5.25617}},
    {4.5, Case::LI, {0.506183, 1.47603, 2.42539, 3.36033, 4.28468, 5.20098, 6.11100, 7.01601, 7.91694}},
    {4.5, Case::LIII, {0.545454, 1.32681, 1.99982, 2.61294, 3.19057, 3.74597, 4.28682, 4.81779, 5.34184}},
    {5.0, Case::LI, {0.505629, 1.47773, 2.43028, 3.36873, 4.29663, 5.21638, 6.12968, 7.03779, 7.94165}},
    {5.0, Case::LIII, {0.541666, 1.33783, 2.02690, 2.65417, 3.24355, 3.80853, 4.35719, 4.89455, 5.42386}},
    {10.0, Case::LI, {0.502964, 1.48698, 2.45789, 3.41801, 4.36910, 5.31253, 6.24942, 7.18066, 8.10699}},
    {10.0, Case::LIII, {0.522727, 1.40126, 2.19447, 2.92575, 3.61106, 4.26162, 4.88548, 5.48851, 6.07511}},
    {100.0, Case::LI, {0.500310, 1.49846, 2.49482, 3.48941, 4.48229, 5.47348, 6.46302, 7.45096, 8.43732}},
    {100.0, Case::LIII, {0.502475, 1.48781, 2.45906, 3.41674, 4.36135, 5.29337, 6.21326, 7.12145, 8.01836}},
    {1e3, Case::LI, {0.500031, 1.49984, 2.49947, 3.49890, 4.49816, 5.49723, 6.49611, 7.49481, 8.49332}},
    {1e3, Case::LIII, {0.500249, 1.49875, 2.49576, 3.49129, 4.48534, 5.47791, 6.46902, 7.45867, 8.44686}},
    {1e4, Case::LI, {0.500003, 1.49998, 2.49995, 3.49989, 4.49982, 5.49972, 6.49961, 7.49948, 8.49933}},
    {1e4, Case::LIII, {0.500025, 1.49988, 2.49958, 3.49913, 4.49853, 5.49778, 6.49688, 7.49583, 8.49463}},
    {1e5, Case::LI, {0.5000003, 1.49999, 2.49999, 3.49999, 4.49998, 5.49997, 6.49996, 7.49995, 8.49993}},
    {1e5, Case::LIII, {0.5000024, 1.49999, 2.49996, 3.49991, 4.49985, 5.49978, 6.49969, 7.49958, 8.49946}},
}};

}  // namespace pdem
