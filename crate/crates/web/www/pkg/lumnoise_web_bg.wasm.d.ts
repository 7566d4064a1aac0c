/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_decayview_free: (a: number, b: number) => void;
export const __wbg_fidelitycurve_free: (a: number, b: number) => void;
export const __wbg_filterview_free: (a: number, b: number) => void;
export const __wbg_get_decayview_converged: (a: number) => number;
export const __wbg_get_decayview_reduced_chi_square: (a: number) => number;
export const __wbg_get_filterview_fidelity: (a: number) => number;
export const __wbg_get_filterview_snr: (a: number) => number;
export const __wbg_get_filterview_spdc_center_nm: (a: number) => number;
export const __wbg_get_filterview_t_lum: (a: number) => number;
export const __wbg_get_filterview_t_spdc: (a: number) => number;
export const __wbg_set_decayview_converged: (a: number, b: number) => void;
export const __wbg_set_decayview_reduced_chi_square: (a: number, b: number) => void;
export const __wbg_set_filterview_fidelity: (a: number, b: number) => void;
export const __wbg_set_filterview_snr: (a: number, b: number) => void;
export const __wbg_set_filterview_spdc_center_nm: (a: number, b: number) => void;
export const __wbg_set_filterview_t_lum: (a: number, b: number) => void;
export const __wbg_set_filterview_t_spdc: (a: number, b: number) => void;
export const decay_demo: (a: number, b: number, c: number) => [number, number, number];
export const decayview_counts: (a: number) => [number, number];
export const decayview_fit: (a: number) => [number, number];
export const decayview_fit_time: (a: number) => [number, number];
export const decayview_flags: (a: number) => [number, number];
export const decayview_lifetimes: (a: number) => [number, number];
export const decayview_relative_amplitudes: (a: number) => [number, number];
export const decayview_time: (a: number) => [number, number];
export const fidelity_curve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const fidelitycurve_approx: (a: number) => [number, number];
export const fidelitycurve_exact: (a: number) => [number, number];
export const fidelitycurve_snr: (a: number) => [number, number];
export const filter_view: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const filterview_lum: (a: number) => [number, number];
export const filterview_spdc: (a: number) => [number, number];
export const filterview_transmission: (a: number) => [number, number];
export const filterview_wavelength: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
