/** Matches the batch package version. */
export const VERSION = "0.1.0";
