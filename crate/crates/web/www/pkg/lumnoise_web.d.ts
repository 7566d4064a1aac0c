/* tslint:disable */
/* eslint-disable */

/**
 * A synthetic luminescence decay and its multi-exponential fit.
 */
export class DecayView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly counts: Float64Array;
    readonly fit: Float64Array;
    readonly fit_time: Float64Array;
    readonly flags: string;
    readonly lifetimes: Float64Array;
    readonly relative_amplitudes: Float64Array;
    readonly time: Float64Array;
    converged: boolean;
    reduced_chi_square: number;
}

/**
 * F against SNR on a log-spaced axis.
 */
export class FidelityCurve {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly approx: Float64Array;
    readonly exact: Float64Array;
    readonly snr: Float64Array;
}

/**
 * Emission spectra, the filter transmission curve and the resulting
 * figures of merit.
 */
export class FilterView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly lum: Float64Array;
    readonly spdc: Float64Array;
    readonly transmission: Float64Array;
    readonly wavelength: Float64Array;
    fidelity: number;
    snr: number;
    spdc_center_nm: number;
    t_lum: number;
    t_spdc: number;
}

/**
 * Draw about `total_counts` luminescence photons from the default decay on a
 * 50 us window and fit `components` exponentials to the tail after 100 ns.
 */
export function decay_demo(total_counts: number, components: number, seed: number): DecayView;

export function fidelity_curve(r_s_hz: number, t_w_ns: number, snr_lo: number, snr_hi: number, points: number): FidelityCurve;

/**
 * Zero (or negative) `cutoff_nm`, `bandpass_fwhm_nm` and `gate_ns` switch
 * that filter off.
 */
export function filter_view(pump_nm: number, polarizer: boolean, cutoff_nm: number, bandpass_fwhm_nm: number, gate_ns: number, repetition_rate_hz: number): FilterView;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_decayview_free: (a: number, b: number) => void;
    readonly __wbg_fidelitycurve_free: (a: number, b: number) => void;
    readonly __wbg_filterview_free: (a: number, b: number) => void;
    readonly __wbg_get_decayview_converged: (a: number) => number;
    readonly __wbg_get_decayview_reduced_chi_square: (a: number) => number;
    readonly __wbg_get_filterview_fidelity: (a: number) => number;
    readonly __wbg_get_filterview_snr: (a: number) => number;
    readonly __wbg_get_filterview_spdc_center_nm: (a: number) => number;
    readonly __wbg_get_filterview_t_lum: (a: number) => number;
    readonly __wbg_get_filterview_t_spdc: (a: number) => number;
    readonly __wbg_set_decayview_converged: (a: number, b: number) => void;
    readonly __wbg_set_decayview_reduced_chi_square: (a: number, b: number) => void;
    readonly __wbg_set_filterview_fidelity: (a: number, b: number) => void;
    readonly __wbg_set_filterview_snr: (a: number, b: number) => void;
    readonly __wbg_set_filterview_spdc_center_nm: (a: number, b: number) => void;
    readonly __wbg_set_filterview_t_lum: (a: number, b: number) => void;
    readonly __wbg_set_filterview_t_spdc: (a: number, b: number) => void;
    readonly decay_demo: (a: number, b: number, c: number) => [number, number, number];
    readonly decayview_counts: (a: number) => [number, number];
    readonly decayview_fit: (a: number) => [number, number];
    readonly decayview_fit_time: (a: number) => [number, number];
    readonly decayview_flags: (a: number) => [number, number];
    readonly decayview_lifetimes: (a: number) => [number, number];
    readonly decayview_relative_amplitudes: (a: number) => [number, number];
    readonly decayview_time: (a: number) => [number, number];
    readonly fidelity_curve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly fidelitycurve_approx: (a: number) => [number, number];
    readonly fidelitycurve_exact: (a: number) => [number, number];
    readonly fidelitycurve_snr: (a: number) => [number, number];
    readonly filter_view: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly filterview_lum: (a: number) => [number, number];
    readonly filterview_spdc: (a: number) => [number, number];
    readonly filterview_transmission: (a: number) => [number, number];
    readonly filterview_wavelength: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
