#ifndef HATA_HATA_HPP
#define HATA_HATA_HPP

#include "hata/address.hpp"
#include "hata/error.hpp"
#include "hata/geometry.hpp"
#include "hata/harmonic.hpp"
#include "hata/harmonic_structure.hpp"
#include "hata/measure.hpp"
#include "hata/spectral.hpp"
#include "hata/trace.hpp"

#endif // HATA_HATA_HPP
