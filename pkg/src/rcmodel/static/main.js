import { ApiClient } from "./api.js";
import { App } from "./app.js";
import { Session } from "./controller.js";
const root = document.getElementById("app");
if (root === null)
    throw new Error("missing #app mount point");
const app = new App(root, new Session(new ApiClient("")));
app.start().catch((err) => {
    root.textContent = `failed to load model: ${err}`;
});
