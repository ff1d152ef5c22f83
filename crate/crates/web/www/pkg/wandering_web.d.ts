/* tslint:disable */
/* eslint-disable */

export class Explorer {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * JSON description of the component under `(re, im)` in the last render.
     */
    component_at(re: number, im: number): string;
    /**
     * `family` is `ex1`, `ex2` or `ex5`; `eps` is ignored for `ex5`.
     * `ex1` uses `a = 2^-6`, `ex2` the certified radius `1/32`.
     */
    constructor(family: string, eps: number);
    /**
     * Classifies the window and returns RGBA bytes, top row first.
     */
    render(re_lo: number, re_hi: number, im_lo: number, im_hi: number, width: number, height: number, max_iter: number): Uint8Array;
    /**
     * JSON winding result of `f(|z - c| = radius)` around `w`.
     */
    winding(c_re: number, c_im: number, radius: number, w_re: number, w_im: number): string;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_explorer_free: (a: number, b: number) => void;
    readonly explorer_component_at: (a: number, b: number, c: number) => [number, number, number, number];
    readonly explorer_new: (a: number, b: number, c: number) => [number, number, number];
    readonly explorer_render: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
    readonly explorer_winding: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
