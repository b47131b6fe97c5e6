// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS channel modelling and beamforming simulations

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
