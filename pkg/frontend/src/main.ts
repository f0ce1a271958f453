import { Dashboard } from "./app";

const root = document.getElementById("app");
if (root) {
    const dashboard = new Dashboard(root);
    void dashboard.refreshDatasets();
}
