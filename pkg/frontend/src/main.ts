import { ApiClient } from "./api.js";
import { mount } from "./app.js";

// Service base URL: ?api=... query parameter wins, else same-origin
// deployments fall back to the conventional local service port.
const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("api") ?? "http://127.0.0.1:8000";

const root = document.getElementById("app");
if (root) {
  void mount(root, new ApiClient(baseUrl));
}
