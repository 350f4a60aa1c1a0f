/** Wire types mirroring the service JSON, field for field. */
export {};
