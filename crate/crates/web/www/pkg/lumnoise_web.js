/* @ts-self-types="./lumnoise_web.d.ts" */

/**
 * A synthetic luminescence decay and its multi-exponential fit.
 */
export class DecayView {
    static __wrap(ptr) {
        const obj = Object.create(DecayView.prototype);
        obj.__wbg_ptr = ptr;
        DecayViewFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        DecayViewFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_decayview_free(ptr, 0);
    }
    /**
     * @returns {Float64Array}
     */
    get counts() {
        const ret = wasm.decayview_counts(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    get fit() {
        const ret = wasm.decayview_fit(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    get fit_time() {
        const ret = wasm.decayview_fit_time(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {string}
     */
    get flags() {
        let deferred1_0;
        let deferred1_1;
        try {
            const ret = wasm.decayview_flags(this.__wbg_ptr);
            deferred1_0 = ret[0];
            deferred1_1 = ret[1];
            return getStringFromWasm0(ret[0], ret[1]);
        } finally {
            wasm.__wbindgen_free(deferred1_0, deferred1_1, 1);
        }
    }
    /**
     * @returns {Float64Array}
     */
    get lifetimes() {
        const ret = wasm.decayview_lifetimes(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    get relative_amplitudes() {
        const ret = wasm.decayview_relative_amplitudes(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    get time() {
        const ret = wasm.decayview_time(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {boolean}
     */
    get converged() {
        const ret = wasm.__wbg_get_decayview_converged(this.__wbg_ptr);
        return ret !== 0;
    }
    /**
     * @returns {number}
     */
    get reduced_chi_square() {
        const ret = wasm.__wbg_get_decayview_reduced_chi_square(this.__wbg_ptr);
        return ret;
    }
    /**
     * @param {boolean} arg0
     */
    set converged(arg0) {
        wasm.__wbg_set_decayview_converged(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set reduced_chi_square(arg0) {
        wasm.__wbg_set_decayview_reduced_chi_square(this.__wbg_ptr, arg0);
    }
}
if (Symbol.dispose) DecayView.prototype[Symbol.dispose] = DecayView.prototype.free;

/**
 * F against SNR on a log-spaced axis.
 */
export class FidelityCurve {
    static __wrap(ptr) {
        const obj = Object.create(FidelityCurve.prototype);
        obj.__wbg_ptr = ptr;
        FidelityCurveFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        FidelityCurveFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_fidelitycurve_free(ptr, 0);
    }
    /**
     * @returns {Float64Array}
     */
    get approx() {
        const ret = wasm.fidelitycurve_approx(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    get exact() {
        const ret = wasm.fidelitycurve_exact(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    get snr() {
        const ret = wasm.fidelitycurve_snr(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
}
if (Symbol.dispose) FidelityCurve.prototype[Symbol.dispose] = FidelityCurve.prototype.free;

/**
 * Emission spectra, the filter transmission curve and the resulting
 * figures of merit.
 */
export class FilterView {
    static __wrap(ptr) {
        const obj = Object.create(FilterView.prototype);
        obj.__wbg_ptr = ptr;
        FilterViewFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        FilterViewFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_filterview_free(ptr, 0);
    }
    /**
     * @returns {Float64Array}
     */
    get lum() {
        const ret = wasm.filterview_lum(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    get spdc() {
        const ret = wasm.filterview_spdc(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    get transmission() {
        const ret = wasm.filterview_transmission(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    get wavelength() {
        const ret = wasm.filterview_wavelength(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {number}
     */
    get fidelity() {
        const ret = wasm.__wbg_get_filterview_fidelity(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get snr() {
        const ret = wasm.__wbg_get_filterview_snr(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get spdc_center_nm() {
        const ret = wasm.__wbg_get_filterview_spdc_center_nm(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get t_lum() {
        const ret = wasm.__wbg_get_filterview_t_lum(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get t_spdc() {
        const ret = wasm.__wbg_get_filterview_t_spdc(this.__wbg_ptr);
        return ret;
    }
    /**
     * @param {number} arg0
     */
    set fidelity(arg0) {
        wasm.__wbg_set_filterview_fidelity(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set snr(arg0) {
        wasm.__wbg_set_filterview_snr(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set spdc_center_nm(arg0) {
        wasm.__wbg_set_filterview_spdc_center_nm(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set t_lum(arg0) {
        wasm.__wbg_set_filterview_t_lum(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set t_spdc(arg0) {
        wasm.__wbg_set_filterview_t_spdc(this.__wbg_ptr, arg0);
    }
}
if (Symbol.dispose) FilterView.prototype[Symbol.dispose] = FilterView.prototype.free;

/**
 * Draw about `total_counts` luminescence photons from the default decay on a
 * 50 us window and fit `components` exponentials to the tail after 100 ns.
 * @param {number} total_counts
 * @param {number} components
 * @param {number} seed
 * @returns {DecayView}
 */
export function decay_demo(total_counts, components, seed) {
    const ret = wasm.decay_demo(total_counts, components, seed);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return DecayView.__wrap(ret[0]);
}

/**
 * @param {number} r_s_hz
 * @param {number} t_w_ns
 * @param {number} snr_lo
 * @param {number} snr_hi
 * @param {number} points
 * @returns {FidelityCurve}
 */
export function fidelity_curve(r_s_hz, t_w_ns, snr_lo, snr_hi, points) {
    const ret = wasm.fidelity_curve(r_s_hz, t_w_ns, snr_lo, snr_hi, points);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return FidelityCurve.__wrap(ret[0]);
}

/**
 * Zero (or negative) `cutoff_nm`, `bandpass_fwhm_nm` and `gate_ns` switch
 * that filter off.
 * @param {number} pump_nm
 * @param {boolean} polarizer
 * @param {number} cutoff_nm
 * @param {number} bandpass_fwhm_nm
 * @param {number} gate_ns
 * @param {number} repetition_rate_hz
 * @returns {FilterView}
 */
export function filter_view(pump_nm, polarizer, cutoff_nm, bandpass_fwhm_nm, gate_ns, repetition_rate_hz) {
    const ret = wasm.filter_view(pump_nm, polarizer, cutoff_nm, bandpass_fwhm_nm, gate_ns, repetition_rate_hz);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return FilterView.__wrap(ret[0]);
}
function __wbg_get_imports() {
    const import0 = {
        __proto__: null,
        __wbg___wbindgen_throw_41e9ee4f547fc59a: function(arg0, arg1) {
            throw new Error(getStringFromWasm0(arg0, arg1));
        },
        __wbindgen_generic_0000000000000001: function(arg0, arg1) {
            // Cast intrinsic for `Ref(String) -> Externref`.
            const ret = getStringFromWasm0(arg0, arg1);
            return ret;
        },
        __wbindgen_init_externref_table: function() {
            const table = wasm.__wbindgen_externrefs;
            const offset = table.grow(4);
            table.set(0, undefined);
            table.set(offset + 0, undefined);
            table.set(offset + 1, null);
            table.set(offset + 2, true);
            table.set(offset + 3, false);
        },
    };
    return {
        __proto__: null,
        "./lumnoise_web_bg.js": import0,
    };
}

const DecayViewFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_decayview_free(ptr, 1));
const FidelityCurveFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_fidelitycurve_free(ptr, 1));
const FilterViewFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_filterview_free(ptr, 1));

function getArrayF64FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getFloat64ArrayMemory0().subarray(ptr / 8, ptr / 8 + len);
}

let cachedFloat64ArrayMemory0 = null;
function getFloat64ArrayMemory0() {
    if (cachedFloat64ArrayMemory0 === null || cachedFloat64ArrayMemory0.byteLength === 0) {
        cachedFloat64ArrayMemory0 = new Float64Array(wasm.memory.buffer);
    }
    return cachedFloat64ArrayMemory0;
}

function getStringFromWasm0(ptr, len) {
    return decodeText(ptr >>> 0, len);
}

let cachedUint8ArrayMemory0 = null;
function getUint8ArrayMemory0() {
    if (cachedUint8ArrayMemory0 === null || cachedUint8ArrayMemory0.byteLength === 0) {
        cachedUint8ArrayMemory0 = new Uint8Array(wasm.memory.buffer);
    }
    return cachedUint8ArrayMemory0;
}

function takeFromExternrefTable0(idx) {
    const value = wasm.__wbindgen_externrefs.get(idx);
    wasm.__externref_table_dealloc(idx);
    return value;
}

let cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
cachedTextDecoder.decode();
const MAX_SAFARI_DECODE_BYTES = 2146435072;
let numBytesDecoded = 0;
function decodeText(ptr, len) {
    numBytesDecoded += len;
    if (numBytesDecoded >= MAX_SAFARI_DECODE_BYTES) {
        cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
        cachedTextDecoder.decode();
        numBytesDecoded = len;
    }
    return cachedTextDecoder.decode(getUint8ArrayMemory0().subarray(ptr, ptr + len));
}

let wasmModule, wasmInstance, wasm;
function __wbg_finalize_init(instance, module) {
    wasmInstance = instance;
    wasm = instance.exports;
    wasmModule = module;
    cachedFloat64ArrayMemory0 = null;
    cachedUint8ArrayMemory0 = null;
    wasm.__wbindgen_start();
    return wasm;
}

async function __wbg_load(module, imports) {
    if (typeof Response === 'function' && module instanceof Response) {
        if (!module.ok) {
            throw new Error(`failed to fetch Wasm: ${module.status} ${module.statusText} fetching '${module.url}'`);
        }

        if (typeof WebAssembly.instantiateStreaming === 'function') {
            try {
                return await WebAssembly.instantiateStreaming(module, imports);
            } catch (e) {
                const validResponse = expectedResponseType(module.type);

                if (validResponse && module.headers.get('Content-Type') !== 'application/wasm') {
                    console.warn("`WebAssembly.instantiateStreaming` failed because your server does not serve Wasm with `application/wasm` MIME type. Falling back to `WebAssembly.instantiate` which is slower. Original error:\n", e);

                } else { throw e; }
            }
        }

        const bytes = await module.arrayBuffer();
        return await WebAssembly.instantiate(bytes, imports);
    } else {
        const instance = await WebAssembly.instantiate(module, imports);

        if (instance instanceof WebAssembly.Instance) {
            return { instance, module };
        } else {
            return instance;
        }
    }

    function expectedResponseType(type) {
        switch (type) {
            case 'basic': case 'cors': case 'default': return true;
        }
        return false;
    }
}

function initSync(module) {
    if (wasm !== undefined) return wasm;


    if (module !== undefined) {
        if (Object.getPrototypeOf(module) === Object.prototype) {
            ({module} = module)
        } else {
            console.warn('using deprecated parameters for `initSync()`; pass a single object instead')
        }
    }

    const imports = __wbg_get_imports();
    if (!(module instanceof WebAssembly.Module)) {
        module = new WebAssembly.Module(module);
    }
    const instance = new WebAssembly.Instance(module, imports);
    return __wbg_finalize_init(instance, module);
}

async function __wbg_init(module_or_path) {
    if (wasm !== undefined) return wasm;


    if (module_or_path !== undefined) {
        if (Object.getPrototypeOf(module_or_path) === Object.prototype) {
            ({module_or_path} = module_or_path)
        } else {
            console.warn('using deprecated parameters for the initialization function; pass a single object instead')
        }
    }

    if (module_or_path === undefined) {
        module_or_path = new URL('lumnoise_web_bg.wasm', import.meta.url);
    }
    const imports = __wbg_get_imports();

    if (typeof module_or_path === 'string' || (typeof Request === 'function' && module_or_path instanceof Request) || (typeof URL === 'function' && module_or_path instanceof URL)) {
        module_or_path = fetch(module_or_path);
    }

    const { instance, module } = await __wbg_load(await module_or_path, imports);

    return __wbg_finalize_init(instance, module);
}

export { initSync, __wbg_init as default };
